use rand::Rng;

/// One bounded decision variable.
#[derive(Debug, Clone, PartialEq)]
pub struct Dimension {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
    /// Optional physical unit, for display only.
    pub unit: Option<String>,
}

impl Dimension {
    pub fn new(name: impl Into<String>, lower: f64, upper: f64) -> Self {
        assert!(
            lower < upper,
            "dimension bounds must satisfy lower < upper, got [{lower}, {upper}]"
        );
        Dimension { name: name.into(), lower, upper, unit: None }
    }

    pub fn with_unit(mut self, unit: impl Into<String>) -> Self {
        self.unit = Some(unit.into());
        self
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lower, self.upper)
    }
}

/// A box-bounded continuous search space.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchSpace {
    dims: Vec<Dimension>,
}

impl SearchSpace {
    pub fn new(dims: Vec<Dimension>) -> Self {
        assert!(!dims.is_empty(), "search space needs at least one dimension");
        SearchSpace { dims }
    }

    /// Uniform box `[lower, upper]^n` with dimensions named `x1..xn`.
    pub fn uniform_box(n: usize, lower: f64, upper: f64) -> Self {
        SearchSpace::new(
            (0..n).map(|i| Dimension::new(format!("x{}", i + 1), lower, upper)).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn dims(&self) -> &[Dimension] {
        &self.dims
    }

    pub fn dim(&self, i: usize) -> &Dimension {
        &self.dims[i]
    }

    pub fn contains(&self, x: &SolutionVector) -> bool {
        x.len() == self.len() && x.iter().zip(&self.dims).all(|(&v, d)| d.contains(v))
    }

    /// Clamp every coordinate into its dimension's bounds.
    pub fn clamp(&self, x: &mut SolutionVector) {
        assert_eq!(x.len(), self.len(), "solution/space dimension mismatch");
        for (v, d) in x.values.iter_mut().zip(&self.dims) {
            *v = d.clamp(*v);
        }
    }

    /// Sample uniformly at random from the box.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> SolutionVector {
        SolutionVector::new(
            self.dims.iter().map(|d| rng.random_range(d.lower..=d.upper)).collect(),
        )
    }
}

/// A point in decision space.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionVector {
    pub values: Vec<f64>,
}

impl SolutionVector {
    pub fn new(values: Vec<f64>) -> Self {
        SolutionVector { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.values.iter()
    }
}

impl std::ops::Index<usize> for SolutionVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

impl From<Vec<f64>> for SolutionVector {
    fn from(values: Vec<f64>) -> Self {
        SolutionVector::new(values)
    }
}

/// A point in objective space. All objectives are minimized.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveVector {
    pub values: Vec<f64>,
}

impl ObjectiveVector {
    pub fn new(values: Vec<f64>) -> Self {
        ObjectiveVector { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.values.iter()
    }

    /// Euclidean distance to another objective vector.
    pub fn distance(&self, other: &ObjectiveVector) -> f64 {
        assert_eq!(self.len(), other.len(), "objective dimension mismatch");
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

impl std::ops::Index<usize> for ObjectiveVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

impl From<Vec<f64>> for ObjectiveVector {
    fn from(values: Vec<f64>) -> Self {
        ObjectiveVector::new(values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sample_stays_in_bounds() {
        let space = SearchSpace::new(vec![
            Dimension::new("p", -100.0, 60.0),
            Dimension::new("v", 35.0, 65.0),
        ]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let x = space.sample(&mut rng);
            assert!(space.contains(&x), "sampled point left the box: {:?}", x);
        }
    }

    #[test]
    fn clamp_pulls_back_into_box() {
        let space = SearchSpace::uniform_box(3, 0.0, 1.0);
        let mut x = SolutionVector::new(vec![-0.5, 0.5, 1.5]);
        space.clamp(&mut x);
        assert_eq!(x.values, vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn objective_distance_is_euclidean() {
        let a = ObjectiveVector::new(vec![0.0, 0.0]);
        let b = ObjectiveVector::new(vec![3.0, 4.0]);
        assert_eq!(a.distance(&b), 5.0);
        assert_eq!(b.distance(&a), 5.0);
        assert_eq!(a.distance(&a), 0.0);
    }

    #[test]
    #[should_panic(expected = "lower < upper")]
    fn inverted_bounds_rejected() {
        Dimension::new("bad", 1.0, 0.0);
    }
}
