//! Benchmark problems with explicit noise models.
//!
//! Every problem exposes both a deterministic ground-truth evaluation (used
//! by the quality metrics) and a noisy evaluation (used by the search). The
//! noise is additive Gaussian per objective unless a problem overrides
//! `noisy_eval` with something more faithful to its domain.

mod scenario;
mod zdt1;

pub use scenario::{ScenarioParams, ScenarioSurrogate, ScenarioVariant};
pub use zdt1::NoisyZdt1;

use crate::core::{ObjectiveVector, SearchSpace, SolutionVector};
use crate::error::{Error, Result};
use rand::RngCore;
use rand_distr::{Distribution, StandardNormal};

/// A minimization problem whose evaluations are corrupted by noise.
pub trait NoisyProblem: Send + Sync {
    /// Short identifier used in manifests and error messages.
    fn name(&self) -> &str;

    fn space(&self) -> &SearchSpace;

    fn objective_count(&self) -> usize;

    /// Per-objective standard deviation of the evaluation noise.
    fn noise_sigma(&self) -> &[f64];

    /// Deterministic ground truth. Panics on out-of-bounds input.
    fn true_eval(&self, x: &SolutionVector) -> ObjectiveVector;

    /// One noisy observation of `x`.
    ///
    /// The default adds independent `N(0, σ_i²)` to each true objective,
    /// drawing nothing for objectives with σ_i = 0 so noise-free objectives
    /// don't advance the stream.
    fn noisy_eval(&self, x: &SolutionVector, rng: &mut dyn RngCore) -> ObjectiveVector {
        let mut values = self.true_eval(x).values;
        for (v, &sigma) in values.iter_mut().zip(self.noise_sigma()) {
            if sigma > 0.0 {
                let z: f64 = StandardNormal.sample(rng);
                *v += sigma * z;
            }
        }
        ObjectiveVector::new(values)
    }

    /// `n_points` samples of the analytic Pareto front, if one is known.
    fn ideal_front(&self, n_points: usize) -> Result<Vec<ObjectiveVector>> {
        let _ = n_points;
        Err(Error::NoAnalyticFront { problem: self.name().to_string() })
    }

    /// Hypervolume reference point shared by all strategies on this problem.
    fn default_reference_point(&self) -> ObjectiveVector;
}
