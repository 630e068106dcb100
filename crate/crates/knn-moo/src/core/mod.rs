//! Fundamental value types shared by every other module: search spaces,
//! solution and objective vectors, Pareto dominance, and the append-only
//! evaluation archive.

mod archive;
mod dominance;
mod space;

pub use archive::{ArchiveSnapshot, Evaluation, EvaluationArchive};
pub use dominance::{dominates, pareto_filter, pareto_filter_indices};
pub use space::{Dimension, ObjectiveVector, SearchSpace, SolutionVector};
