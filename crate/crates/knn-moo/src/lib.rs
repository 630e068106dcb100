//! Noisy multi-objective search with kNN-averaged fitness.
//!
//! The crate bundles everything needed to study noise-handling strategies for
//! multi-objective genetic search under a fixed evaluation budget:
//!
//! * [`core`] — solution/objective vectors, Pareto dominance, and the
//!   append-only evaluation archive shared by all strategies.
//! * [`problems`] — noisy benchmark problems (noisy ZDT1) and a synthetic
//!   crash-scenario surrogate with a calibrated Gaussian noise model.
//! * [`noise`] — the fitness-assignment strategies: baseline, n-fold
//!   repetition, and kNN-averaging over archived neighbours.
//! * [`optimizer`] — an NSGA-II generational loop driven by assigned fitness.
//! * [`metrics`] — 2-D hypervolume, predicted/effective front assessment, and
//!   the mean prediction error ΔF.
//! * [`stats`] — Mann-Whitney U significance plus Vargha-Delaney Â12 effect
//!   size, folded into per-metric verdicts.
//! * [`runner`] — config-file driven experiment campaigns with seeded run
//!   matrices and CSV emission.
//!
//! The `knn-moo` binary exposes the runner as a CLI (`run`, `table`, `plots`).

// Negated float comparisons are deliberate throughout: `!(x > 0.0)` treats
// NaN as invalid where `x <= 0.0` would accept it, and the RNG gates keep
// the exact branch shape of the operator definitions.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod core;
pub mod error;
pub mod metrics;
pub mod noise;
pub mod optimizer;
pub mod problems;
pub mod runner;
pub mod seeding;
pub mod stats;

pub use error::{Error, Result};
