//! NSGA-II generational search driven by strategy-assigned fitness.
//!
//! The loop never sees raw noisy observations directly: every candidate is
//! routed through the active [`Strategy`](crate::noise::Strategy), which
//! decides what the optimizer gets to treat as fitness and what lands in the
//! evaluation archive. The evaluation budget is fixed up front; the number
//! of generations follows from it, the population size, and the strategy's
//! per-individual cost.

mod nsga2;
mod operators;

pub use nsga2::{
    binary_tournament, crowding_distance, environmental_selection, fast_non_dominated_sort,
};
pub use operators::{polynomial_mutation, sbx_crossover};

use crate::core::{pareto_filter_indices, EvaluationArchive, ObjectiveVector, SolutionVector};
use crate::error::{Error, Result};
use crate::noise::{snapshot_entries, Strategy};
use crate::problems::NoisyProblem;
use crate::seeding::derive_seed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// One population member. `rank` and `crowding` are maintained by the
/// non-dominated sorting machinery and are only meaningful for individuals
/// that went through it together.
#[derive(Debug, Clone)]
pub struct Individual {
    pub solution: SolutionVector,
    /// Assigned (strategy-smoothed) objective values.
    pub fitness: ObjectiveVector,
    pub rank: usize,
    pub crowding: f64,
}

impl Individual {
    pub fn new(solution: SolutionVector, fitness: ObjectiveVector) -> Self {
        Individual { solution, fitness, rank: 0, crowding: 0.0 }
    }
}

/// Search hyperparameters and the evaluation budget.
#[derive(Debug, Clone, PartialEq)]
pub struct GAConfig {
    /// Even, ≥ 4.
    pub population_size: usize,
    /// Total problem evaluations the run may spend (noisy draws, counting
    /// each repetition of a repeated evaluation).
    pub total_budget: u64,
    pub crossover_probability: f64,
    pub crossover_eta: f64,
    /// Per-gene mutation probability; `None` means 1/dimensions.
    pub mutation_probability: Option<f64>,
    pub mutation_eta: f64,
    pub seed: u64,
}

impl GAConfig {
    /// Standard NSGA-II operator defaults.
    pub fn new(population_size: usize, total_budget: u64, seed: u64) -> Self {
        GAConfig {
            population_size,
            total_budget,
            crossover_probability: 0.9,
            crossover_eta: 15.0,
            mutation_probability: None,
            mutation_eta: 20.0,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |field: &str, message: String| {
            Err(Error::InvalidConfig { field: field.into(), message })
        };
        if self.population_size < 4 || !self.population_size.is_multiple_of(2) {
            return invalid(
                "population_size",
                format!("must be an even number ≥ 4, got {}", self.population_size),
            );
        }
        if !(0.0..=1.0).contains(&self.crossover_probability) {
            return invalid(
                "crossover_probability",
                format!("must be in [0,1], got {}", self.crossover_probability),
            );
        }
        if let Some(p) = self.mutation_probability {
            if !(0.0..=1.0).contains(&p) {
                return invalid("mutation_probability", format!("must be in [0,1], got {p}"));
            }
        }
        if !(self.crossover_eta > 0.0) || !self.crossover_eta.is_finite() {
            return invalid(
                "crossover_eta",
                format!("must be a positive real, got {}", self.crossover_eta),
            );
        }
        if !(self.mutation_eta > 0.0) || !self.mutation_eta.is_finite() {
            return invalid(
                "mutation_eta",
                format!("must be a positive real, got {}", self.mutation_eta),
            );
        }
        Ok(())
    }

    /// Number of generations the budget affords (initial population
    /// included), never spending more than `total_budget`.
    pub fn generations_for(&self, cost_per_individual: u32) -> Result<u64> {
        let per_generation = self.population_size as u64 * u64::from(cost_per_individual);
        let generations = self.total_budget / per_generation;
        if generations < 2 {
            return Err(Error::BudgetTooSmall {
                budget: self.total_budget,
                required: 2 * per_generation,
            });
        }
        Ok(generations)
    }
}

/// Result of one complete search run.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub final_population: Vec<Individual>,
    /// Non-dominated members of the final population by assigned fitness,
    /// in population order.
    pub predicted_front: Vec<Individual>,
    pub archive: EvaluationArchive,
    pub generations: u64,
    pub consumed_budget: u64,
}

/// Stepwise search state; [`run`] drives it from start to finish, tests can
/// drive it one generation at a time.
pub struct RunState<'a> {
    problem: &'a dyn NoisyProblem,
    strategy: Strategy,
    cfg: GAConfig,
    mutation_probability: f64,
    planned_generations: u64,
    generation: u32,
    ga_rng: ChaCha8Rng,
    noise_rng: ChaCha8Rng,
    pub population: Vec<Individual>,
    pub archive: EvaluationArchive,
}

impl<'a> RunState<'a> {
    /// Validate everything and evaluate the initial population
    /// (generation 0).
    pub fn new(problem: &'a dyn NoisyProblem, strategy: &Strategy, cfg: &GAConfig) -> Result<Self> {
        cfg.validate()?;
        strategy.validate()?;
        let planned_generations = cfg.generations_for(strategy.cost_per_individual())?;
        let dims = problem.space().len();
        let mut state = RunState {
            problem,
            strategy: strategy.clone(),
            cfg: cfg.clone(),
            mutation_probability: cfg.mutation_probability.unwrap_or(1.0 / dims as f64),
            planned_generations,
            generation: 0,
            ga_rng: ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, "ga")),
            noise_rng: ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, "noise")),
            population: Vec::new(),
            archive: EvaluationArchive::new(dims),
        };
        let initial: Vec<SolutionVector> = (0..cfg.population_size)
            .map(|_| problem.space().sample(&mut state.ga_rng))
            .collect();
        state.population = state.evaluate_generation(initial, 0);
        nsga2::rank_population(&mut state.population);
        Ok(state)
    }

    pub fn planned_generations(&self) -> u64 {
        self.planned_generations
    }

    /// Generations evaluated so far, counting the initial population.
    pub fn completed_generations(&self) -> u64 {
        u64::from(self.generation) + 1
    }

    /// Evaluate one generation's solutions against the generation-start
    /// archive snapshot, then append them in index order.
    fn evaluate_generation(
        &mut self,
        solutions: Vec<SolutionVector>,
        generation: u32,
    ) -> Vec<Individual> {
        let snapshot = self.archive.snapshot();
        let results: Vec<_> = solutions
            .iter()
            .map(|x| {
                self.strategy.evaluate(
                    self.problem,
                    x,
                    snapshot_entries(&self.archive, &snapshot),
                    &snapshot.sigma2,
                    &mut self.noise_rng,
                )
            })
            .collect();
        solutions
            .into_iter()
            .zip(results)
            .map(|(x, r)| {
                self.archive.push(x.clone(), r.raw, r.assigned.clone(), generation, r.cost);
                Individual::new(x, r.assigned)
            })
            .collect()
    }

    /// Breed, evaluate, and select one offspring generation.
    pub fn step(&mut self) {
        self.generation += 1;
        let n = self.cfg.population_size;
        let space = self.problem.space();
        let mut offspring = Vec::with_capacity(n);
        while offspring.len() < n {
            let p1 = binary_tournament(&self.population, &mut self.ga_rng);
            let p2 = binary_tournament(&self.population, &mut self.ga_rng);
            let (c1, c2) = sbx_crossover(
                &self.population[p1].solution,
                &self.population[p2].solution,
                space,
                self.cfg.crossover_probability,
                self.cfg.crossover_eta,
                &mut self.ga_rng,
            );
            for child in [c1, c2] {
                if offspring.len() < n {
                    offspring.push(polynomial_mutation(
                        &child,
                        space,
                        self.mutation_probability,
                        self.cfg.mutation_eta,
                        &mut self.ga_rng,
                    ));
                }
            }
        }
        let evaluated = self.evaluate_generation(offspring, self.generation);
        let mut merged = std::mem::take(&mut self.population);
        merged.extend(evaluated);
        self.population = environmental_selection(merged, n);
    }

    pub fn finish(self) -> RunOutput {
        let fitnesses: Vec<ObjectiveVector> =
            self.population.iter().map(|i| i.fitness.clone()).collect();
        let predicted_front: Vec<Individual> = pareto_filter_indices(&fitnesses)
            .into_iter()
            .map(|i| self.population[i].clone())
            .collect();
        let consumed_budget = self.archive.total_cost();
        RunOutput {
            final_population: self.population,
            predicted_front,
            archive: self.archive,
            generations: self.planned_generations,
            consumed_budget,
        }
    }
}

/// Run NSGA-II to budget exhaustion under the given noise strategy.
pub fn run(problem: &dyn NoisyProblem, strategy: &Strategy, cfg: &GAConfig) -> Result<RunOutput> {
    let mut state = RunState::new(problem, strategy, cfg)?;
    for _ in 1..state.planned_generations() {
        state.step();
    }
    Ok(state.finish())
}
