//! Config-driven experiment campaigns.
//!
//! An experiment runs every configured approach `repetitions_per_approach`
//! times on one problem with one budget, assesses each final front, and
//! writes a fully reproducible bundle of files:
//!
//! - `manifest.toml` — resolved config, per-run seeds, per-run results
//! - `results.csv` — one row per successful run
//! - `fronts/<approach>-<run>.csv` — predicted/effective front pairs
//! - `verdicts.csv` / `verdicts.txt` — pairwise significance table
//!   ([`emit_verdict_table`])
//! - `hv_pred.csv`, `hv_eff.csv`, `delta_f.csv` — long-format metric data
//!   ([`emit_plot_data`])
//!
//! Every run's seed is `base_seed ⊕ hash("<label>/<index>")`, so any single
//! cell of the run matrix can be reproduced without executing the others,
//! and re-running a campaign reproduces every output byte for byte.

pub mod config;
pub mod output;

pub use config::{ApproachSpec, ExperimentConfig, GaSpec, ProblemSpec};
pub use output::{Manifest, RunRecord, RunStatus};

use crate::error::{Error, Result};
use crate::metrics::{assess, FrontAssessment};
use crate::optimizer;
use crate::seeding::derive_seed;
use crate::stats::{compare, ComparisonVerdict};
use rayon::prelude::*;
use std::path::{Path, PathBuf};

/// Everything kept in memory about one finished run.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub approach: String,
    pub run_index: u32,
    pub seed: u64,
    pub assessment: FrontAssessment,
    pub generations: u64,
    pub consumed_budget: u64,
    pub archive_size: usize,
}

/// Summary of a finished (possibly partially failed) experiment.
#[derive(Debug)]
pub struct ExperimentOutcome {
    pub dir: PathBuf,
    pub manifest: Manifest,
    pub completed: usize,
    pub failed: usize,
}

/// The seed for one cell of the run matrix. XOR-ing the base seed with a
/// stable hash of `"<label>/<index>"` decorrelates approaches and runs while
/// keeping every cell reproducible in isolation.
pub fn run_seed(base_seed: u64, label: &str, run_index: u32) -> u64 {
    derive_seed(base_seed, &format!("{label}/{run_index}"))
}

/// Execute one (approach, run index) cell: search, then assessment.
pub fn execute_run(
    cfg: &ExperimentConfig,
    spec: &ApproachSpec,
    run_index: u32,
) -> Result<RunResult> {
    let (problem, reference) = cfg.problem.build()?;
    let strategy = spec.to_strategy();
    let label = strategy.label();
    let seed = run_seed(cfg.base_seed, &label, run_index);
    let ga = cfg.ga.to_ga_config(seed);
    let run = optimizer::run(problem.as_ref(), &strategy, &ga)?;
    let assessment = assess(
        &run,
        problem.as_ref(),
        &reference,
        cfg.effective_reps,
        derive_seed(seed, "assess"),
    )?;
    Ok(RunResult {
        approach: label,
        run_index,
        seed,
        generations: run.generations,
        consumed_budget: run.consumed_budget,
        archive_size: run.archive.len(),
        assessment,
    })
}

fn record_for(
    label: &str,
    run_index: u32,
    seed: u64,
    result: &Result<RunResult>,
) -> RunRecord {
    match result {
        Ok(r) => RunRecord {
            approach: r.approach.clone(),
            run_index: r.run_index,
            seed: r.seed,
            status: RunStatus::Ok,
            error: None,
            generations: Some(r.generations),
            consumed_budget: Some(r.consumed_budget),
            archive_size: Some(r.archive_size as u64),
            front_size: Some(r.assessment.predicted.len() as u64),
            hv_pred: Some(r.assessment.hv_pred),
            hv_eff: Some(r.assessment.hv_eff),
            delta_f: Some(r.assessment.delta_f),
        },
        Err(e) => RunRecord {
            approach: label.to_string(),
            run_index,
            seed,
            status: RunStatus::Failed,
            error: Some(e.to_string()),
            generations: None,
            consumed_budget: None,
            archive_size: None,
            front_size: None,
            hv_pred: None,
            hv_eff: None,
            delta_f: None,
        },
    }
}

/// Run the whole campaign and write `manifest.toml`, `results.csv`, and the
/// per-run front dumps into the configured output directory.
///
/// Individual run failures don't abort the experiment: they are recorded in
/// the manifest (with their seed and error) and excluded from result files.
/// `jobs` caps the number of parallel runs; `None` uses all cores. Outputs
/// are identical regardless of parallelism.
pub fn run_experiment(cfg: &ExperimentConfig, jobs: Option<usize>) -> Result<ExperimentOutcome> {
    cfg.validate()?;
    let dir = cfg.resolved_output_dir()?.to_path_buf();
    std::fs::create_dir_all(&dir)
        .map_err(|e| Error::Io { path: dir.display().to_string(), source: e })?;
    let fronts_dir = dir.join(output::FRONTS_DIR);
    if fronts_dir.is_dir() {
        // Stale dumps from a previous, larger campaign would otherwise linger.
        std::fs::remove_dir_all(&fronts_dir)
            .map_err(|e| Error::Io { path: fronts_dir.display().to_string(), source: e })?;
    }

    let cells: Vec<(&ApproachSpec, u32)> = cfg
        .approaches
        .iter()
        .flat_map(|a| (0..cfg.repetitions_per_approach).map(move |i| (a, i)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidConfig { field: "jobs".into(), message: e.to_string() })?;
    let results: Vec<(String, u32, Result<RunResult>)> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(spec, index)| (spec.label(), index, execute_run(cfg, spec, index)))
            .collect()
    });

    let mut runs = Vec::with_capacity(results.len());
    let mut completed = 0usize;
    let mut failed = 0usize;
    for (label, index, result) in &results {
        let seed = run_seed(cfg.base_seed, label, *index);
        runs.push(record_for(label, *index, seed, result));
        match result {
            Ok(r) => {
                output::write_front_csv(&dir, &r.approach, r.run_index, &r.assessment)?;
                completed += 1;
            }
            Err(_) => failed += 1,
        }
    }

    let (problem, _) = cfg.problem.build()?;
    let manifest = Manifest {
        name: cfg.name.clone(),
        base_seed: cfg.base_seed,
        repetitions_per_approach: cfg.repetitions_per_approach,
        effective_reps: cfg.effective_reps,
        alpha: cfg.alpha,
        failed_runs: failed as u32,
        problem: cfg.problem.resolved()?,
        ga: cfg.ga.resolved(problem.space().len()),
        approaches: cfg.approaches.clone(),
        runs,
    };
    manifest.write(&dir)?;
    output::write_results_csv(&dir, &manifest)?;
    Ok(ExperimentOutcome { dir, manifest, completed, failed })
}

/// All pairwise verdicts in presentation order: each approach against every
/// approach listed before it in the config, three metrics per pair
/// (predicted hypervolume, effective hypervolume, fitness error).
pub fn verdicts_for(manifest: &Manifest) -> Result<Vec<ComparisonVerdict>> {
    let labels = manifest.approach_labels();
    for label in &labels {
        let n = manifest.ok_runs(label).len();
        if n < 2 {
            return Err(Error::InvalidConfig {
                field: "approaches".into(),
                message: format!(
                    "approach '{label}' has {n} successful runs; statistics need at least 2"
                ),
            });
        }
    }
    let mut out = Vec::new();
    for j in 1..labels.len() {
        for i in 0..j {
            for (metric, _, higher_is_better) in output::METRICS {
                out.push(compare(
                    metric,
                    labels[j].as_str(),
                    labels[i].as_str(),
                    &manifest.metric_samples(&labels[j], metric),
                    &manifest.metric_samples(&labels[i], metric),
                    manifest.alpha,
                    higher_is_better,
                ));
            }
        }
    }
    Ok(out)
}

/// Recompute the pairwise verdict table for a finished experiment directory
/// and write `verdicts.csv` and `verdicts.txt`.
pub fn emit_verdict_table(dir: &Path) -> Result<(PathBuf, PathBuf)> {
    let manifest = Manifest::load(dir)?;
    let verdicts = verdicts_for(&manifest)?;
    let csv_path = output::write_verdicts_csv(dir, &verdicts)?;
    let text = output::render_verdict_text(&manifest, &verdicts);
    let txt_path = output::write_verdict_text(dir, &text)?;
    Ok((csv_path, txt_path))
}

/// Write the long-format metric CSVs for a finished experiment directory and
/// verify its front dumps are in place. Returns every plot-data file.
pub fn emit_plot_data(dir: &Path) -> Result<Vec<PathBuf>> {
    let manifest = Manifest::load(dir)?;
    let mut paths = Vec::new();
    for (metric, _, _) in output::METRICS {
        paths.push(output::write_metric_csv(dir, metric, &manifest)?);
    }
    for run in manifest.runs.iter().filter(|r| r.status == RunStatus::Ok) {
        let path = dir
            .join(output::FRONTS_DIR)
            .join(output::front_file_name(&run.approach, run.run_index));
        if !path.is_file() {
            return Err(Error::Io {
                path: path.display().to_string(),
                source: std::io::Error::new(
                    std::io::ErrorKind::NotFound,
                    "front dump missing; re-run the experiment",
                ),
            });
        }
        paths.push(path);
    }
    Ok(paths)
}
