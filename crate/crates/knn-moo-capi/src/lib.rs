//! C ABI for the noisy multi-objective search library.
//!
//! Conventions, also documented in the generated header:
//!
//! - Every fallible function returns a [`KmooStatus`]. Results go to out
//!   pointers and are written only on `KMOO_STATUS_OK`.
//! - After any non-OK status, [`kmoo_last_error`] returns a NUL-terminated,
//!   thread-local message. It stays valid until the next failing call on the
//!   same thread; never free it.
//! - Handles are created and released by this library; pass each to its
//!   matching `_free` function exactly once. `_free` ignores NULL.
//! - Panics never unwind across the boundary: they are caught and reported
//!   as `KMOO_STATUS_PANIC` with the panic message preserved. Library
//!   contract violations (e.g. statistical tests on fewer than two samples)
//!   surface this way.
//! - Buffers are always caller-allocated; functions that fill one take its
//!   capacity and fail with `KMOO_STATUS_INVALID_ARGUMENT` if it is too
//!   small.

use knn_moo::core::{pareto_filter_indices, ObjectiveVector, SolutionVector};
use knn_moo::metrics::{assess, try_hypervolume_2d};
use knn_moo::noise::{sed, Strategy};
use knn_moo::optimizer::{run, GAConfig, RunOutput};
use knn_moo::problems::{NoisyProblem, NoisyZdt1, ScenarioSurrogate};
use knn_moo::runner::{self, ExperimentConfig};
use knn_moo::stats::{mann_whitney_u, vargha_delaney_a12};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

/// Result code of every fallible call in this API.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KmooStatus {
    /// Success; out parameters are filled.
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// Arguments were rejected (bad sizes, bad configuration, undersized
    /// buffers). Details via `kmoo_last_error`.
    InvalidArgument = 2,
    /// The operation itself failed. Details via `kmoo_last_error`.
    RunFailed = 3,
    /// A panic was caught at the language boundary. Details via
    /// `kmoo_last_error`.
    Panic = 4,
}

/// Which noise-handling strategy [`KmooStrategy`] selects.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KmooStrategyKind {
    /// Single noisy evaluation per individual (cost 1).
    Baseline = 0,
    /// Mean of `n` evaluations per individual (cost `n`).
    Repetition = 1,
    /// One evaluation averaged with the raw values of the k−1 nearest
    /// archived neighbors (cost 1).
    Knn = 2,
}

/// Noise-handling strategy selector. Fields other than `kind` are read only
/// where noted.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct KmooStrategy {
    pub kind: KmooStrategyKind,
    /// Evaluations per individual; `Repetition` only, must be ≥ 2.
    pub n: u32,
    /// Neighborhood size including the new point; `Knn` only, must be ≥ 1.
    pub k: u32,
    /// Standardized-distance cutoff for neighbors; `Knn` only, must be > 0
    /// (may be INFINITY for no cutoff).
    pub max_sed: f64,
}

impl KmooStrategy {
    fn to_strategy(self) -> Strategy {
        match self.kind {
            KmooStrategyKind::Baseline => Strategy::Baseline,
            KmooStrategyKind::Repetition => Strategy::Repetition { n: self.n },
            KmooStrategyKind::Knn => Strategy::Knn { k: self.k, max_sed: self.max_sed },
        }
    }
}

/// Opaque handle to an optimization problem.
pub struct KmooProblem {
    inner: Box<dyn NoisyProblem>,
}

/// Opaque handle to one finished search run.
pub struct KmooRun {
    output: RunOutput,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message)
        .unwrap_or_else(|_| CString::new("error message contained NUL").expect("static"));
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn null_pointer() -> KmooStatus {
    set_last_error("required pointer argument was NULL".into());
    KmooStatus::NullPointer
}

fn invalid(message: String) -> KmooStatus {
    set_last_error(message);
    KmooStatus::InvalidArgument
}

fn fail(error: knn_moo::Error) -> KmooStatus {
    let status = match error {
        knn_moo::Error::InvalidConfig { .. }
        | knn_moo::Error::UnsupportedDimension { .. }
        | knn_moo::Error::BudgetTooSmall { .. } => KmooStatus::InvalidArgument,
        _ => KmooStatus::RunFailed,
    };
    set_last_error(error.to_string());
    status
}

fn panic_message(payload: Box<dyn std::any::Any + Send>) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "unknown panic payload".to_string()
    }
}

fn guarded(body: impl FnOnce() -> KmooStatus) -> KmooStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(payload) => {
            set_last_error(format!("panic: {}", panic_message(payload)));
            KmooStatus::Panic
        }
    }
}

/// NULL is only acceptable for an empty slice.
unsafe fn slice_arg<'a>(ptr: *const f64, len: usize) -> Option<&'a [f64]> {
    if len == 0 {
        Some(&[])
    } else if ptr.is_null() {
        None
    } else {
        Some(unsafe { std::slice::from_raw_parts(ptr, len) })
    }
}

unsafe fn str_arg<'a>(ptr: *const c_char) -> Result<&'a str, KmooStatus> {
    if ptr.is_null() {
        return Err(null_pointer());
    }
    unsafe { CStr::from_ptr(ptr) }
        .to_str()
        .map_err(|_| invalid("string argument is not valid UTF-8".into()))
}

fn objective_rows(values: &[f64], row_len: usize) -> Vec<ObjectiveVector> {
    values.chunks_exact(row_len).map(|c| ObjectiveVector::new(c.to_vec())).collect()
}

/// The message of the most recent failure on this thread, or NULL if no
/// call has failed yet. Valid until the next failing call on this thread;
/// do not free.
#[no_mangle]
pub extern "C" fn kmoo_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

// --------------------------------------------------------------- kernels

/// Exact 2-D hypervolume of `points` (row-major f1,f2 pairs) with respect
/// to `reference` (2 values). Dominated and out-of-reference points are
/// handled internally, so any point set is acceptable.
#[no_mangle]
pub extern "C" fn kmoo_hypervolume_2d(
    points: *const f64,
    point_count: usize,
    reference: *const f64,
    out_hypervolume: *mut f64,
) -> KmooStatus {
    guarded(|| {
        let (points, reference) =
            match unsafe { (slice_arg(points, point_count * 2), slice_arg(reference, 2)) } {
                (Some(p), Some(r)) => (p, r),
                _ => return null_pointer(),
            };
        if out_hypervolume.is_null() {
            return null_pointer();
        }
        let front = objective_rows(points, 2);
        match try_hypervolume_2d(&front, &ObjectiveVector::new(reference.to_vec())) {
            Ok(hv) => {
                unsafe { *out_hypervolume = hv };
                KmooStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Two-sided Mann-Whitney U p-value for two sample sets (each must hold at
/// least two values; exact for small tie-free samples, normal approximation
/// with tie correction otherwise).
#[no_mangle]
pub extern "C" fn kmoo_mann_whitney_u(
    samples_a: *const f64,
    count_a: usize,
    samples_b: *const f64,
    count_b: usize,
    out_p_value: *mut f64,
) -> KmooStatus {
    guarded(|| {
        let (a, b) = match unsafe { (slice_arg(samples_a, count_a), slice_arg(samples_b, count_b)) }
        {
            (Some(a), Some(b)) => (a, b),
            _ => return null_pointer(),
        };
        if out_p_value.is_null() {
            return null_pointer();
        }
        let p = mann_whitney_u(a, b);
        unsafe { *out_p_value = p };
        KmooStatus::Ok
    })
}

/// Vargha-Delaney Â₁₂ effect size: the probability that a value drawn from
/// the first sample exceeds one drawn from the second (ties count half).
#[no_mangle]
pub extern "C" fn kmoo_vargha_delaney_a12(
    samples_a: *const f64,
    count_a: usize,
    samples_b: *const f64,
    count_b: usize,
    out_a12: *mut f64,
) -> KmooStatus {
    guarded(|| {
        let (a, b) = match unsafe { (slice_arg(samples_a, count_a), slice_arg(samples_b, count_b)) }
        {
            (Some(a), Some(b)) => (a, b),
            _ => return null_pointer(),
        };
        if out_a12.is_null() {
            return null_pointer();
        }
        let a12 = vargha_delaney_a12(a, b);
        unsafe { *out_a12 = a12 };
        KmooStatus::Ok
    })
}

/// Standardized Euclidean distance between two decision vectors: each
/// squared coordinate difference is divided by that dimension's variance
/// before summing.
#[no_mangle]
pub extern "C" fn kmoo_standardized_distance(
    x1: *const f64,
    x2: *const f64,
    variances: *const f64,
    dimension_count: usize,
    out_distance: *mut f64,
) -> KmooStatus {
    guarded(|| {
        let (x1, x2, variances) = match unsafe {
            (
                slice_arg(x1, dimension_count),
                slice_arg(x2, dimension_count),
                slice_arg(variances, dimension_count),
            )
        } {
            (Some(a), Some(b), Some(v)) => (a, b, v),
            _ => return null_pointer(),
        };
        if out_distance.is_null() {
            return null_pointer();
        }
        let d = sed(
            &SolutionVector::new(x1.to_vec()),
            &SolutionVector::new(x2.to_vec()),
            variances,
        );
        unsafe { *out_distance = d };
        KmooStatus::Ok
    })
}

/// Marks the non-dominated rows of a point matrix (row-major,
/// `point_count × objective_count`, minimization): `out_mask[i]` becomes 1
/// when row i is dominated by no other row, else 0. Duplicates of a
/// non-dominated row are all kept.
#[no_mangle]
pub extern "C" fn kmoo_pareto_mask(
    points: *const f64,
    point_count: usize,
    objective_count: usize,
    out_mask: *mut u8,
) -> KmooStatus {
    guarded(|| {
        if objective_count == 0 {
            return invalid("objective_count must be at least 1".into());
        }
        let Some(points) = (unsafe { slice_arg(points, point_count * objective_count) }) else {
            return null_pointer();
        };
        if out_mask.is_null() && point_count > 0 {
            return null_pointer();
        }
        let rows = objective_rows(points, objective_count);
        let keep = pareto_filter_indices(&rows);
        let mask = unsafe { std::slice::from_raw_parts_mut(out_mask, point_count) };
        mask.fill(0);
        for i in keep {
            mask[i] = 1;
        }
        KmooStatus::Ok
    })
}

// --------------------------------------------------------------- handles

/// Creates the noisy ZDT1 benchmark (dimensions ≥ 2; additive Gaussian
/// noise with the given per-objective σ ≥ 0).
#[no_mangle]
pub extern "C" fn kmoo_problem_zdt1(
    dimensions: usize,
    sigma_f1: f64,
    sigma_f2: f64,
    out_problem: *mut *mut KmooProblem,
) -> KmooStatus {
    guarded(|| {
        if out_problem.is_null() {
            return null_pointer();
        }
        match NoisyZdt1::new(dimensions, (sigma_f1, sigma_f2)) {
            Ok(p) => {
                let handle = Box::new(KmooProblem { inner: Box::new(p) });
                unsafe { *out_problem = Box::into_raw(handle) };
                KmooStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Creates the crossing-pedestrian surrogate, variant 1 (ego position ×
/// velocity) or 2 (pedestrian velocity × trigger delay × trigger position),
/// with its published default constants.
#[no_mangle]
pub extern "C" fn kmoo_problem_scenario(
    variant: u32,
    out_problem: *mut *mut KmooProblem,
) -> KmooStatus {
    guarded(|| {
        if out_problem.is_null() {
            return null_pointer();
        }
        let problem = match variant {
            1 => ScenarioSurrogate::ss1(),
            2 => ScenarioSurrogate::ss2(),
            other => return invalid(format!("scenario variant must be 1 or 2, got {other}")),
        };
        let handle = Box::new(KmooProblem { inner: Box::new(problem) });
        unsafe { *out_problem = Box::into_raw(handle) };
        KmooStatus::Ok
    })
}

/// Releases a problem handle. NULL is ignored.
#[no_mangle]
pub extern "C" fn kmoo_problem_free(problem: *mut KmooProblem) {
    if !problem.is_null() {
        drop(unsafe { Box::from_raw(problem) });
    }
}

/// Runs the full budgeted NSGA-II search: `total_budget` evaluations split
/// into generations of `population_size` individuals at the strategy's
/// per-individual cost. Same arguments and seed ⇒ bit-identical results.
#[no_mangle]
pub extern "C" fn kmoo_run(
    problem: *const KmooProblem,
    strategy: *const KmooStrategy,
    population_size: usize,
    total_budget: u64,
    seed: u64,
    out_run: *mut *mut KmooRun,
) -> KmooStatus {
    guarded(|| {
        if problem.is_null() || strategy.is_null() || out_run.is_null() {
            return null_pointer();
        }
        let problem = unsafe { &*problem };
        let strategy = unsafe { *strategy }.to_strategy();
        let cfg = GAConfig::new(population_size, total_budget, seed);
        match run(problem.inner.as_ref(), &strategy, &cfg) {
            Ok(output) => {
                let handle = Box::new(KmooRun { output });
                unsafe { *out_run = Box::into_raw(handle) };
                KmooStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Releases a run handle. NULL is ignored.
#[no_mangle]
pub extern "C" fn kmoo_run_free(run: *mut KmooRun) {
    if !run.is_null() {
        drop(unsafe { Box::from_raw(run) });
    }
}

/// Number of solutions on the run's predicted front (0 for NULL).
#[no_mangle]
pub extern "C" fn kmoo_run_front_size(run: *const KmooRun) -> usize {
    if run.is_null() {
        return 0;
    }
    unsafe { &*run }.output.predicted_front.len()
}

/// Decision-space dimensionality of the run's solutions (0 for NULL).
#[no_mangle]
pub extern "C" fn kmoo_run_dimension_count(run: *const KmooRun) -> usize {
    if run.is_null() {
        return 0;
    }
    let run = unsafe { &*run };
    run.output.predicted_front.first().map_or(0, |m| m.solution.len())
}

/// Objective count of the run's fitness vectors (0 for NULL).
#[no_mangle]
pub extern "C" fn kmoo_run_objective_count(run: *const KmooRun) -> usize {
    if run.is_null() {
        return 0;
    }
    let run = unsafe { &*run };
    run.output.predicted_front.first().map_or(0, |m| m.fitness.len())
}

/// Generations the run executed, the initial population included (0 for
/// NULL).
#[no_mangle]
pub extern "C" fn kmoo_run_generations(run: *const KmooRun) -> u64 {
    if run.is_null() {
        return 0;
    }
    unsafe { &*run }.output.generations
}

/// Evaluation budget the run consumed (0 for NULL).
#[no_mangle]
pub extern "C" fn kmoo_run_consumed_budget(run: *const KmooRun) -> u64 {
    if run.is_null() {
        return 0;
    }
    unsafe { &*run }.output.consumed_budget
}

/// Number of archived evaluations the run accumulated (0 for NULL).
#[no_mangle]
pub extern "C" fn kmoo_run_archive_size(run: *const KmooRun) -> usize {
    if run.is_null() {
        return 0;
    }
    unsafe { &*run }.output.archive.len()
}

fn copy_front(
    run: *const KmooRun,
    out_values: *mut f64,
    capacity: usize,
    row: impl Fn(&knn_moo::optimizer::Individual) -> &[f64],
) -> KmooStatus {
    if run.is_null() || out_values.is_null() {
        return null_pointer();
    }
    let front = &unsafe { &*run }.output.predicted_front;
    let needed: usize = front.iter().map(|m| row(m).len()).sum();
    if capacity < needed {
        return invalid(format!("buffer capacity {capacity} but {needed} values needed"));
    }
    let out = unsafe { std::slice::from_raw_parts_mut(out_values, needed) };
    let mut at = 0;
    for member in front {
        let values = row(member);
        out[at..at + values.len()].copy_from_slice(values);
        at += values.len();
    }
    KmooStatus::Ok
}

/// Copies the predicted front's fitness values into `out_values`, row-major
/// `front_size × objective_count`. `capacity` is the buffer length in
/// doubles.
#[no_mangle]
pub extern "C" fn kmoo_run_front_objectives(
    run: *const KmooRun,
    out_values: *mut f64,
    capacity: usize,
) -> KmooStatus {
    guarded(|| copy_front(run, out_values, capacity, |m| &m.fitness.values))
}

/// Copies the predicted front's decision vectors into `out_values`,
/// row-major `front_size × dimension_count`. `capacity` is the buffer
/// length in doubles.
#[no_mangle]
pub extern "C" fn kmoo_run_front_solutions(
    run: *const KmooRun,
    out_values: *mut f64,
    capacity: usize,
) -> KmooStatus {
    guarded(|| copy_front(run, out_values, capacity, |m| &m.solution.values))
}

/// Re-evaluates the run's predicted front `effective_reps` times per
/// solution (seeded, not budget-counted) and reports predicted hypervolume,
/// effective hypervolume, and the mean predicted↔effective objective
/// distance. The problem's default reference point is used.
#[no_mangle]
pub extern "C" fn kmoo_assess(
    run: *const KmooRun,
    problem: *const KmooProblem,
    effective_reps: u32,
    seed: u64,
    out_hv_pred: *mut f64,
    out_hv_eff: *mut f64,
    out_delta_f: *mut f64,
) -> KmooStatus {
    guarded(|| {
        if run.is_null()
            || problem.is_null()
            || out_hv_pred.is_null()
            || out_hv_eff.is_null()
            || out_delta_f.is_null()
        {
            return null_pointer();
        }
        let run = unsafe { &*run };
        let problem = unsafe { &*problem };
        let reference = problem.inner.default_reference_point();
        match assess(&run.output, problem.inner.as_ref(), &reference, effective_reps, seed) {
            Ok(a) => {
                unsafe {
                    *out_hv_pred = a.hv_pred;
                    *out_hv_eff = a.hv_eff;
                    *out_delta_f = a.delta_f;
                }
                KmooStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

// ------------------------------------------------------------ experiments

/// Runs a whole experiment campaign from a TOML config file, writing the
/// manifest, per-run results, and front dumps to the output directory
/// (`output_dir` overrides the config's when non-NULL). `jobs` caps
/// parallel runs; 0 means all cores. `out_failed_runs` (optional) receives
/// the number of failed runs; failures are recorded in the manifest and do
/// not make the call fail.
#[no_mangle]
pub extern "C" fn kmoo_run_experiment(
    config_path: *const c_char,
    output_dir: *const c_char,
    jobs: usize,
    out_failed_runs: *mut u32,
) -> KmooStatus {
    guarded(|| {
        let path = match unsafe { str_arg(config_path) } {
            Ok(s) => s,
            Err(status) => return status,
        };
        let mut cfg = match ExperimentConfig::load(std::path::Path::new(path)) {
            Ok(cfg) => cfg,
            Err(e) => return fail(e),
        };
        if !output_dir.is_null() {
            match unsafe { str_arg(output_dir) } {
                Ok(dir) => cfg.output_dir = Some(PathBuf::from(dir)),
                Err(status) => return status,
            }
        }
        match runner::run_experiment(&cfg, (jobs > 0).then_some(jobs)) {
            Ok(outcome) => {
                if !out_failed_runs.is_null() {
                    unsafe { *out_failed_runs = outcome.failed as u32 };
                }
                KmooStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Writes `verdicts.csv` and `verdicts.txt` (pairwise significance table)
/// for a finished experiment directory.
#[no_mangle]
pub extern "C" fn kmoo_emit_verdict_table(experiment_dir: *const c_char) -> KmooStatus {
    guarded(|| {
        let dir = match unsafe { str_arg(experiment_dir) } {
            Ok(s) => s,
            Err(status) => return status,
        };
        match runner::emit_verdict_table(std::path::Path::new(dir)) {
            Ok(_) => KmooStatus::Ok,
            Err(e) => fail(e),
        }
    })
}

/// Writes the long-format metric CSVs (`hv_pred.csv`, `hv_eff.csv`,
/// `delta_f.csv`) for a finished experiment directory.
#[no_mangle]
pub extern "C" fn kmoo_emit_plot_data(experiment_dir: *const c_char) -> KmooStatus {
    guarded(|| {
        let dir = match unsafe { str_arg(experiment_dir) } {
            Ok(s) => s,
            Err(status) => return status,
        };
        match runner::emit_plot_data(std::path::Path::new(dir)) {
            Ok(_) => KmooStatus::Ok,
            Err(e) => fail(e),
        }
    })
}
