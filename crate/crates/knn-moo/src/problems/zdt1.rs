use super::NoisyProblem;
use crate::core::{ObjectiveVector, SearchSpace, SolutionVector};
use crate::error::{Error, Result};

/// The two-objective ZDT1 benchmark with additive Gaussian observation noise.
///
/// `f1 = x1`, `g = 1 + 9·Σ_{i≥2} x_i/(n−1)`, `f2 = g·(1 − √(f1/g))` over
/// `[0,1]ⁿ`. The analytic Pareto front is `f2 = 1 − √f1` (all `x_{i≥2} = 0`).
pub struct NoisyZdt1 {
    space: SearchSpace,
    noise_sigma: [f64; 2],
}

impl NoisyZdt1 {
    pub fn new(dimensions: usize, noise_sigma: (f64, f64)) -> Result<Self> {
        if dimensions < 2 {
            return Err(Error::UnsupportedDimension {
                requested: dimensions,
                reason: "the g term needs at least one non-f1 variable".into(),
            });
        }
        for (i, s) in [noise_sigma.0, noise_sigma.1].into_iter().enumerate() {
            if !(s >= 0.0) {
                return Err(Error::InvalidConfig {
                    field: format!("noise_sigma[{i}]"),
                    message: format!("must be ≥ 0, got {s}"),
                });
            }
        }
        Ok(NoisyZdt1 {
            space: SearchSpace::uniform_box(dimensions, 0.0, 1.0),
            noise_sigma: [noise_sigma.0, noise_sigma.1],
        })
    }
}

impl Default for NoisyZdt1 {
    fn default() -> Self {
        NoisyZdt1::new(10, (0.05, 0.05)).expect("default parameters are valid")
    }
}

impl NoisyProblem for NoisyZdt1 {
    fn name(&self) -> &str {
        "noisy-zdt1"
    }

    fn space(&self) -> &SearchSpace {
        &self.space
    }

    fn objective_count(&self) -> usize {
        2
    }

    fn noise_sigma(&self) -> &[f64] {
        &self.noise_sigma
    }

    fn true_eval(&self, x: &SolutionVector) -> ObjectiveVector {
        assert!(
            self.space.contains(x),
            "zdt1 input out of domain [0,1]^{}: {:?}",
            self.space.len(),
            x
        );
        let n = x.len();
        let f1 = x[0];
        let g = 1.0 + 9.0 * x.iter().skip(1).sum::<f64>() / (n as f64 - 1.0);
        let f2 = g * (1.0 - (f1 / g).sqrt());
        ObjectiveVector::new(vec![f1, f2])
    }

    fn ideal_front(&self, n_points: usize) -> Result<Vec<ObjectiveVector>> {
        if n_points == 0 {
            return Err(Error::EmptyFront { context: "ideal_front(0)".into() });
        }
        // Evenly spaced interior f1 values: (i+1)/(n+0.5) keeps both ends
        // strictly inside (0,1) with a uniform step.
        let denom = n_points as f64 + 0.5;
        Ok((0..n_points)
            .map(|i| {
                let f1 = (i as f64 + 1.0) / denom;
                ObjectiveVector::new(vec![f1, 1.0 - f1.sqrt()])
            })
            .collect())
    }

    fn default_reference_point(&self) -> ObjectiveVector {
        // f2 can reach g·1 ≈ 10 when all tail variables sit at 1; the ref
        // must bound noisy observations of the whole objective space.
        ObjectiveVector::new(vec![1.1, 10.0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::dominates;

    fn eval(x: &[f64]) -> ObjectiveVector {
        NoisyZdt1::default().true_eval(&SolutionVector::new(x.to_vec()))
    }

    #[test]
    fn origin_maps_to_zero_one() {
        assert_eq!(eval(&[0.0; 10]).values, vec![0.0, 1.0]);
    }

    #[test]
    fn unit_f1_on_front_maps_to_one_zero() {
        let mut x = vec![0.0; 10];
        x[0] = 1.0;
        assert_eq!(eval(&x).values, vec![1.0, 0.0]);
    }

    #[test]
    fn front_point_matches_known_value() {
        let mut x = vec![0.0; 10];
        x[0] = 0.02020202;
        let o = eval(&x);
        assert!((o[0] - 0.02020202).abs() < 1e-9);
        assert!((o[1] - 0.85786619).abs() < 1e-6, "f2 = {}", o[1]);
    }

    #[test]
    fn g_term_raises_f2_off_front() {
        let on = eval(&[0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let off = eval(&[0.5, 0.3, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(on[0], off[0]);
        assert!(off[1] > on[1]);
    }

    #[test]
    #[should_panic(expected = "out of domain")]
    fn out_of_domain_panics() {
        eval(&[1.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn rejects_single_dimension() {
        assert!(matches!(
            NoisyZdt1::new(1, (0.05, 0.05)),
            Err(Error::UnsupportedDimension { requested: 1, .. })
        ));
    }

    #[test]
    fn rejects_negative_sigma() {
        assert!(NoisyZdt1::new(5, (-0.1, 0.05)).is_err());
    }

    #[test]
    fn ideal_front_is_on_the_true_surface() {
        let p = NoisyZdt1::default();
        for pt in p.ideal_front(49).unwrap() {
            let mut x = vec![0.0; 10];
            x[0] = pt[0];
            let o = p.true_eval(&SolutionVector::new(x));
            assert!((o[1] - pt[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn ideal_front_endpoints_for_49_points() {
        let front = NoisyZdt1::default().ideal_front(49).unwrap();
        assert_eq!(front.len(), 49);
        assert!((front[0][0] - 0.02020202).abs() < 1e-7);
        assert!((front[0][1] - 0.85786619).abs() < 1e-7);
        assert!((front[48][0] - 0.98989899).abs() < 1e-7);
        assert!((front[48][1] - 0.00506332).abs() < 1e-7);
    }

    #[test]
    fn ideal_front_is_mutually_non_dominated_and_monotone() {
        let front = NoisyZdt1::default().ideal_front(20).unwrap();
        for a in &front {
            for b in &front {
                assert!(!dominates(a, b) || a == b);
            }
        }
        for w in front.windows(2) {
            assert!(w[1][0] > w[0][0]);
            assert!(w[1][1] < w[0][1]);
        }
    }

    #[test]
    fn ideal_front_zero_points_is_an_error() {
        assert!(NoisyZdt1::default().ideal_front(0).is_err());
    }
}
