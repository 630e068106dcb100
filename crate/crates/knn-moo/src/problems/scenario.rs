use super::NoisyProblem;
use crate::core::{Dimension, ObjectiveVector, SearchSpace, SolutionVector};
use crate::error::{Error, Result};
use rand::RngCore;
use rand_distr::{Distribution, StandardNormal};

/// Which decision variables the scenario exposes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioVariant {
    /// SS1: ego start position [m] and velocity [km/h].
    Ss1,
    /// SS2: velocity [km/h], trigger delay [s], trigger position [m].
    Ss2,
}

/// Constants of the closed-form crash-scenario surrogate.
///
/// The surrogate stands in for a driving simulator: two vehicles approach a
/// conflict point, and the objective is the minimum distance between them.
/// That distance is zero when the ego vehicle starts exactly at the
/// velocity-dependent critical position, and grows linearly with the offset
/// from it. Measurement noise perturbs the signed offset, so the observed
/// distance is folded Gaussian near the critical point — small distances
/// are noisy but never negative, and no configuration collides every time.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioParams {
    /// Critical position offset at zero velocity [m].
    pub base_critical_position: f64,
    /// Seconds of travel folded into the critical position; the critical
    /// position shifts by −(critical_time + trigger_delay)·v/3.6.
    pub critical_time: f64,
    /// Metres of true minimum distance per metre of position error.
    pub distance_slope: f64,
    /// Standard deviation of the distance measurement noise [m].
    pub noise_sigma_distance: f64,
    /// Distances below this count as a collision [m].
    pub collision_threshold: f64,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        ScenarioParams {
            base_critical_position: 0.0,
            critical_time: 3.0,
            distance_slope: 1.0,
            noise_sigma_distance: 2.0,
            collision_threshold: 0.5,
        }
    }
}

impl ScenarioParams {
    fn validate(&self) -> Result<()> {
        if !(self.noise_sigma_distance > 0.0) {
            return Err(Error::InvalidConfig {
                field: "noise_sigma_distance".into(),
                message: format!("must be > 0, got {}", self.noise_sigma_distance),
            });
        }
        if !(self.collision_threshold > 0.0) {
            return Err(Error::InvalidConfig {
                field: "collision_threshold".into(),
                message: format!("must be > 0, got {}", self.collision_threshold),
            });
        }
        if !(self.distance_slope > 0.0) {
            return Err(Error::InvalidConfig {
                field: "distance_slope".into(),
                message: format!("must be > 0, got {}", self.distance_slope),
            });
        }
        Ok(())
    }
}

/// Synthetic crash scenario: minimize the vehicles' minimum distance (f1, m)
/// and the ego velocity (f2, km/h). Only f1 is noisy; f2 is copied from the
/// solution vector.
pub struct ScenarioSurrogate {
    variant: ScenarioVariant,
    params: ScenarioParams,
    space: SearchSpace,
    noise_sigma: [f64; 2],
    name: &'static str,
}

impl ScenarioSurrogate {
    pub fn new(variant: ScenarioVariant, params: ScenarioParams) -> Result<Self> {
        params.validate()?;
        let (space, name) = match variant {
            ScenarioVariant::Ss1 => (
                SearchSpace::new(vec![
                    Dimension::new("position", -100.0, 60.0).with_unit("m"),
                    Dimension::new("velocity", 35.0, 65.0).with_unit("km/h"),
                ]),
                "scenario-ss1",
            ),
            ScenarioVariant::Ss2 => (
                SearchSpace::new(vec![
                    Dimension::new("velocity", 3.0, 100.0).with_unit("km/h"),
                    Dimension::new("trigger_delay", 0.0, 10.0).with_unit("s"),
                    Dimension::new("trigger_position", -20.0, 20.0).with_unit("m"),
                ]),
                "scenario-ss2",
            ),
        };
        let noise_sigma = [params.noise_sigma_distance, 0.0];
        Ok(ScenarioSurrogate { variant, params, space, noise_sigma, name })
    }

    pub fn ss1() -> Self {
        ScenarioSurrogate::new(ScenarioVariant::Ss1, ScenarioParams::default())
            .expect("default parameters are valid")
    }

    pub fn ss2() -> Self {
        ScenarioSurrogate::new(ScenarioVariant::Ss2, ScenarioParams::default())
            .expect("default parameters are valid")
    }

    pub fn variant(&self) -> ScenarioVariant {
        self.variant
    }

    pub fn params(&self) -> &ScenarioParams {
        &self.params
    }

    /// Collision-critical ego position for the given velocity and trigger
    /// delay: the other vehicle covers (critical_time + delay) seconds of
    /// travel at v km/h before the conflict point.
    pub fn critical_position(&self, velocity_kmh: f64, trigger_delay_s: f64) -> f64 {
        self.params.base_critical_position
            - (self.params.critical_time + trigger_delay_s) * velocity_kmh / 3.6
    }

    /// Signed distance in metres: positive when the ego passes behind the
    /// critical point, negative in front of it. The observable minimum
    /// distance is its absolute value.
    fn signed_distance(&self, x: &SolutionVector) -> (f64, f64) {
        assert!(
            self.space.contains(x),
            "{} input out of bounds: {:?}",
            self.name,
            x
        );
        let (position, velocity, delay) = match self.variant {
            ScenarioVariant::Ss1 => (x[0], x[1], 0.0),
            ScenarioVariant::Ss2 => (x[2], x[0], x[1]),
        };
        let signed =
            self.params.distance_slope * (position - self.critical_position(velocity, delay));
        (signed, velocity)
    }

    pub fn is_collision(&self, distance_m: f64) -> bool {
        distance_m < self.params.collision_threshold
    }
}

impl NoisyProblem for ScenarioSurrogate {
    fn name(&self) -> &str {
        self.name
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
        let (signed, velocity) = self.signed_distance(x);
        ObjectiveVector::new(vec![signed.abs(), velocity])
    }

    /// The noise perturbs the signed offset, not the folded distance: a
    /// measured distance is |signed + ε|, so it stays non-negative and near
    /// the critical point follows a folded Gaussian.
    fn noisy_eval(&self, x: &SolutionVector, rng: &mut dyn RngCore) -> ObjectiveVector {
        let (signed, velocity) = self.signed_distance(x);
        let z: f64 = StandardNormal.sample(rng);
        let distance = (signed + self.params.noise_sigma_distance * z).abs();
        ObjectiveVector::new(vec![distance, velocity])
    }

    fn default_reference_point(&self) -> ObjectiveVector {
        ObjectiveVector::new(vec![170.0, 100.0])
    }
}
