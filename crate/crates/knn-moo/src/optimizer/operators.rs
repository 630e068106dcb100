use crate::core::{SearchSpace, SolutionVector};
use rand::Rng;

/// Genes closer than this are treated as equal by SBX, which keeps the
/// operator an exact fixed point on identical parents.
const SBX_EPS: f64 = 1e-14;

/// Simulated binary crossover with children clipped to the search space.
///
/// With probability `1 − probability` the parents pass through unchanged.
/// Otherwise each differing gene is recombined with a spread factor drawn
/// from the SBX distribution with index `eta`; the two children sit
/// symmetrically around the parents' midpoint (before clipping).
pub fn sbx_crossover<R: Rng + ?Sized>(
    p1: &SolutionVector,
    p2: &SolutionVector,
    space: &SearchSpace,
    probability: f64,
    eta: f64,
    rng: &mut R,
) -> (SolutionVector, SolutionVector) {
    assert_eq!(p1.len(), space.len(), "parent/space dimension mismatch");
    assert_eq!(p2.len(), space.len(), "parent/space dimension mismatch");
    if !(rng.random::<f64>() < probability) {
        return (p1.clone(), p2.clone());
    }
    let n = p1.len();
    let mut c1 = Vec::with_capacity(n);
    let mut c2 = Vec::with_capacity(n);
    for i in 0..n {
        let (a, b) = (p1[i], p2[i]);
        if (a - b).abs() <= SBX_EPS {
            c1.push(a);
            c2.push(b);
            continue;
        }
        let u: f64 = rng.random();
        let beta = if u <= 0.5 {
            (2.0 * u).powf(1.0 / (eta + 1.0))
        } else {
            (1.0 / (2.0 * (1.0 - u))).powf(1.0 / (eta + 1.0))
        };
        let x1 = 0.5 * ((1.0 + beta) * a + (1.0 - beta) * b);
        let x2 = 0.5 * ((1.0 - beta) * a + (1.0 + beta) * b);
        let dim = space.dim(i);
        c1.push(dim.clamp(x1));
        c2.push(dim.clamp(x2));
    }
    (SolutionVector::new(c1), SolutionVector::new(c2))
}

/// Bounded polynomial mutation: each gene mutates independently with the
/// given probability; the perturbation distribution narrows as `eta` grows
/// and respects the gene's bounds.
pub fn polynomial_mutation<R: Rng + ?Sized>(
    x: &SolutionVector,
    space: &SearchSpace,
    probability: f64,
    eta: f64,
    rng: &mut R,
) -> SolutionVector {
    assert_eq!(x.len(), space.len(), "solution/space dimension mismatch");
    let values = x
        .iter()
        .enumerate()
        .map(|(i, &xi)| {
            if !(rng.random::<f64>() < probability) {
                return xi;
            }
            let dim = space.dim(i);
            let range = dim.upper - dim.lower;
            let u: f64 = rng.random();
            let delta_q = if u < 0.5 {
                let d = (xi - dim.lower) / range;
                let v = 2.0 * u + (1.0 - 2.0 * u) * (1.0 - d).powf(eta + 1.0);
                v.powf(1.0 / (eta + 1.0)) - 1.0
            } else {
                let d = (dim.upper - xi) / range;
                let v = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d).powf(eta + 1.0);
                1.0 - v.powf(1.0 / (eta + 1.0))
            };
            dim.clamp(xi + delta_q * range)
        })
        .collect();
    SolutionVector::new(values)
}
