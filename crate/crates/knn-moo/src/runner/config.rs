use crate::core::ObjectiveVector;
use crate::error::{Error, Result};
use crate::noise::Strategy;
use crate::problems::{NoisyProblem, NoisyZdt1, ScenarioParams, ScenarioSurrogate, ScenarioVariant};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

fn default_repetitions() -> u32 {
    10
}
fn default_effective_reps() -> u32 {
    30
}
fn default_alpha() -> f64 {
    0.05
}
fn default_max_sed() -> f64 {
    2.0
}

/// One noise-handling approach as written in a config file (and echoed in
/// the manifest).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ApproachSpec {
    Baseline,
    Repetition {
        n: u32,
    },
    Knn {
        k: u32,
        #[serde(default = "default_max_sed")]
        max_sed: f64,
    },
}

impl ApproachSpec {
    pub fn to_strategy(&self) -> Strategy {
        match *self {
            ApproachSpec::Baseline => Strategy::Baseline,
            ApproachSpec::Repetition { n } => Strategy::Repetition { n },
            ApproachSpec::Knn { k, max_sed } => Strategy::Knn { k, max_sed },
        }
    }

    pub fn label(&self) -> String {
        self.to_strategy().label()
    }
}

/// Problem selection plus its constants, as configured.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    /// `zdt1`, `ss1`, or `ss2`.
    pub kind: String,
    /// Decision-space dimensionality (zdt1 only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dimensions: Option<usize>,
    /// Per-objective noise σ (zdt1 only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noise_sigma: Option<[f64; 2]>,
    /// Hypervolume reference point; defaults to the problem's own.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference_point: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base_critical_position: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub critical_time: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distance_slope: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noise_sigma_distance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub collision_threshold: Option<f64>,
}

impl ProblemSpec {
    fn scenario_fields(&self) -> [(&'static str, Option<f64>); 5] {
        [
            ("problem.base_critical_position", self.base_critical_position),
            ("problem.critical_time", self.critical_time),
            ("problem.distance_slope", self.distance_slope),
            ("problem.noise_sigma_distance", self.noise_sigma_distance),
            ("problem.collision_threshold", self.collision_threshold),
        ]
    }

    /// The same spec with every default filled in, validated. This is what
    /// the manifest echoes, so outputs are reproducible from it alone.
    pub fn resolved(&self) -> Result<ProblemSpec> {
        let mut spec = self.clone();
        match self.kind.to_lowercase().as_str() {
            "zdt1" => {
                for (field, value) in self.scenario_fields() {
                    if value.is_some() {
                        return Err(Error::InvalidConfig {
                            field: field.into(),
                            message: "only valid for scenario problems (ss1/ss2)".into(),
                        });
                    }
                }
                spec.kind = "zdt1".into();
                spec.dimensions = Some(self.dimensions.unwrap_or(10));
                spec.noise_sigma = Some(self.noise_sigma.unwrap_or([0.05, 0.05]));
            }
            kind @ ("ss1" | "ss2") => {
                if self.dimensions.is_some() {
                    return Err(Error::InvalidConfig {
                        field: "problem.dimensions".into(),
                        message: "scenario search spaces have fixed dimensions".into(),
                    });
                }
                if self.noise_sigma.is_some() {
                    return Err(Error::InvalidConfig {
                        field: "problem.noise_sigma".into(),
                        message: "scenario noise is set via noise_sigma_distance".into(),
                    });
                }
                let defaults = ScenarioParams::default();
                spec.kind = kind.into();
                spec.base_critical_position = Some(
                    self.base_critical_position.unwrap_or(defaults.base_critical_position),
                );
                spec.critical_time = Some(self.critical_time.unwrap_or(defaults.critical_time));
                spec.distance_slope =
                    Some(self.distance_slope.unwrap_or(defaults.distance_slope));
                spec.noise_sigma_distance = Some(
                    self.noise_sigma_distance.unwrap_or(defaults.noise_sigma_distance),
                );
                spec.collision_threshold = Some(
                    self.collision_threshold.unwrap_or(defaults.collision_threshold),
                );
            }
            other => {
                return Err(Error::InvalidConfig {
                    field: "problem.kind".into(),
                    message: format!("unknown problem '{other}' (expected zdt1, ss1, or ss2)"),
                })
            }
        }
        let problem = spec.instantiate()?;
        if spec.reference_point.is_none() {
            let r = problem.default_reference_point();
            spec.reference_point = Some([r[0], r[1]]);
        }
        Ok(spec)
    }

    /// Instantiate the configured problem and its reference point.
    pub fn build(&self) -> Result<(Box<dyn NoisyProblem>, ObjectiveVector)> {
        let spec = self.resolved()?;
        let problem = spec.instantiate()?;
        let [a, b] = spec.reference_point.expect("resolved() fills the reference point");
        Ok((problem, ObjectiveVector::new(vec![a, b])))
    }

    /// Construct from a resolved spec (all per-kind fields present).
    fn instantiate(&self) -> Result<Box<dyn NoisyProblem>> {
        Ok(match self.kind.as_str() {
            "zdt1" => {
                let sigma = self.noise_sigma.expect("resolved");
                Box::new(NoisyZdt1::new(self.dimensions.expect("resolved"), (sigma[0], sigma[1]))?)
            }
            kind => {
                let params = ScenarioParams {
                    base_critical_position: self.base_critical_position.expect("resolved"),
                    critical_time: self.critical_time.expect("resolved"),
                    distance_slope: self.distance_slope.expect("resolved"),
                    noise_sigma_distance: self.noise_sigma_distance.expect("resolved"),
                    collision_threshold: self.collision_threshold.expect("resolved"),
                };
                let variant =
                    if kind == "ss1" { ScenarioVariant::Ss1 } else { ScenarioVariant::Ss2 };
                Box::new(ScenarioSurrogate::new(variant, params)?)
            }
        })
    }
}

/// GA settings as configured; optional operator fields fall back to the
/// standard defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaSpec {
    pub population_size: usize,
    pub total_budget: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crossover_probability: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crossover_eta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mutation_probability: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mutation_eta: Option<f64>,
}

impl GaSpec {
    /// The same spec with operator defaults filled in, for the manifest.
    pub fn resolved(&self, decision_dimensions: usize) -> GaSpec {
        let defaults = crate::optimizer::GAConfig::new(self.population_size, self.total_budget, 0);
        GaSpec {
            population_size: self.population_size,
            total_budget: self.total_budget,
            crossover_probability: Some(
                self.crossover_probability.unwrap_or(defaults.crossover_probability),
            ),
            crossover_eta: Some(self.crossover_eta.unwrap_or(defaults.crossover_eta)),
            mutation_probability: Some(
                self.mutation_probability.unwrap_or(1.0 / decision_dimensions as f64),
            ),
            mutation_eta: Some(self.mutation_eta.unwrap_or(defaults.mutation_eta)),
        }
    }

    /// Concrete GA configuration for one run.
    pub fn to_ga_config(&self, seed: u64) -> crate::optimizer::GAConfig {
        let mut cfg =
            crate::optimizer::GAConfig::new(self.population_size, self.total_budget, seed);
        if let Some(p) = self.crossover_probability {
            cfg.crossover_probability = p;
        }
        if let Some(e) = self.crossover_eta {
            cfg.crossover_eta = e;
        }
        cfg.mutation_probability = self.mutation_probability;
        if let Some(e) = self.mutation_eta {
            cfg.mutation_eta = e;
        }
        cfg
    }
}

/// A full experiment campaign: one problem, one budget, several approaches,
/// several seeded repetitions of each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    /// Where outputs go; may be supplied on the command line instead.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    pub base_seed: u64,
    #[serde(default = "default_repetitions")]
    pub repetitions_per_approach: u32,
    #[serde(default = "default_effective_reps")]
    pub effective_reps: u32,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    pub problem: ProblemSpec,
    pub ga: GaSpec,
    pub approaches: Vec<ApproachSpec>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io { path: path.display().to_string(), source: e })?;
        Self::from_toml_str(&text, &path.display().to_string())
    }

    pub fn from_toml_str(text: &str, origin: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text)
            .map_err(|e| Error::Parse { path: origin.into(), message: e.to_string() })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |field: &str, message: String| {
            Err(Error::InvalidConfig { field: field.into(), message })
        };
        if self.name.is_empty() {
            return invalid("name", "must not be empty".into());
        }
        if self.repetitions_per_approach < 1 {
            return invalid("repetitions_per_approach", "must be ≥ 1".into());
        }
        if self.effective_reps < 1 {
            return invalid("effective_reps", "must be ≥ 1".into());
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return invalid("alpha", format!("must be in (0,1), got {}", self.alpha));
        }
        if self.approaches.is_empty() {
            return invalid("approaches", "need at least one approach".into());
        }
        let mut labels: Vec<String> = Vec::new();
        for spec in &self.approaches {
            let strategy = spec.to_strategy();
            strategy.validate()?;
            let label = strategy.label();
            if labels.contains(&label) {
                return invalid("approaches", format!("duplicate approach '{label}'"));
            }
            // Exact budget parity across approaches: the budget must divide
            // into whole generations for every per-individual cost, or the
            // floor rule would hand approaches different effective budgets.
            let per_generation =
                self.ga.population_size as u64 * u64::from(strategy.cost_per_individual());
            if per_generation == 0 || !self.ga.total_budget.is_multiple_of(per_generation) {
                return invalid(
                    "ga.total_budget",
                    format!(
                        "{} is not a whole number of generations for '{label}' \
                         (population {} × cost {}); nearest lower multiple is {}",
                        self.ga.total_budget,
                        self.ga.population_size,
                        strategy.cost_per_individual(),
                        (self.ga.total_budget / per_generation.max(1)) * per_generation
                    ),
                );
            }
            labels.push(label);
        }
        // Problem construction and GA validation double as field checks.
        self.problem.build()?;
        self.ga.to_ga_config(0).validate()?;
        let cost = self
            .approaches
            .iter()
            .map(|a| a.to_strategy().cost_per_individual())
            .max()
            .expect("approaches checked non-empty");
        self.ga.to_ga_config(0).generations_for(cost)?;
        Ok(())
    }

    /// The output directory, once it has to exist.
    pub fn resolved_output_dir(&self) -> Result<&Path> {
        self.output_dir.as_deref().ok_or_else(|| Error::InvalidConfig {
            field: "output_dir".into(),
            message: "not set in the config and no --out given".into(),
        })
    }
}
