use super::space::{ObjectiveVector, SolutionVector};

/// One archived fitness evaluation.
#[derive(Debug, Clone)]
pub struct Evaluation {
    /// Insertion sequence number, unique within one archive.
    pub id: u64,
    pub solution: SolutionVector,
    /// Objective values as produced by the (noisy) problem. For an n-fold
    /// repeated evaluation this is the mean of the n draws.
    pub raw: ObjectiveVector,
    /// Objective values the optimizer actually used for this individual
    /// (e.g. the kNN-averaged values). Equals `raw` for the baseline.
    pub assigned: ObjectiveVector,
    /// Generation the evaluation happened in (0 = initial population).
    pub generation: u32,
    /// Evaluation budget consumed (1 for single draws, n for n-fold).
    pub cost: u32,
}

/// Frozen view of the archive at a point in time.
///
/// Neighbour queries during a generation must not see entries appended in
/// that same generation, and must use the dimension variances as they were
/// when the generation started. The snapshot captures both: a length
/// watermark and the per-dimension variance vector.
#[derive(Debug, Clone)]
pub struct ArchiveSnapshot {
    pub watermark: usize,
    pub sigma2: Vec<f64>,
}

/// Variances below this are clamped so standardized distances stay finite
/// even when an archived dimension is (nearly) constant.
const VAR_FLOOR: f64 = 1e-12;

/// Append-only store of every fitness evaluation a run has performed,
/// with running per-dimension statistics over the archived solutions.
#[derive(Debug, Clone)]
pub struct EvaluationArchive {
    entries: Vec<Evaluation>,
    total_cost: u64,
    // Welford accumulators, one per decision-space dimension.
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl EvaluationArchive {
    pub fn new(dimensions: usize) -> Self {
        assert!(dimensions > 0, "archive needs at least one dimension");
        EvaluationArchive {
            entries: Vec::new(),
            total_cost: 0,
            mean: vec![0.0; dimensions],
            m2: vec![0.0; dimensions],
        }
    }

    pub fn dimensions(&self) -> usize {
        self.mean.len()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Evaluation] {
        &self.entries
    }

    /// Sum of `cost` over all entries — the evaluation budget consumed.
    pub fn total_cost(&self) -> u64 {
        self.total_cost
    }

    /// Append an evaluation and fold its solution into the running stats.
    /// Returns the new entry's id.
    pub fn push(
        &mut self,
        solution: SolutionVector,
        raw: ObjectiveVector,
        assigned: ObjectiveVector,
        generation: u32,
        cost: u32,
    ) -> u64 {
        assert_eq!(
            solution.len(),
            self.dimensions(),
            "solution/archive dimension mismatch"
        );
        assert_eq!(raw.len(), assigned.len(), "raw/assigned objective mismatch");
        let id = self.entries.len() as u64;
        let n = (self.entries.len() + 1) as f64;
        for (i, &x) in solution.iter().enumerate() {
            let delta = x - self.mean[i];
            self.mean[i] += delta / n;
            self.m2[i] += delta * (x - self.mean[i]);
        }
        self.total_cost += u64::from(cost);
        self.entries.push(Evaluation { id, solution, raw, assigned, generation, cost });
        id
    }

    /// Per-dimension sample variance (n−1 denominator) of the archived
    /// solutions, clamped away from zero. With fewer than two entries every
    /// dimension reports the floor value.
    pub fn sigma2(&self) -> Vec<f64> {
        let n = self.entries.len();
        if n < 2 {
            return vec![VAR_FLOOR; self.dimensions()];
        }
        self.m2.iter().map(|&m2| (m2 / (n as f64 - 1.0)).max(VAR_FLOOR)).collect()
    }

    /// Freeze the current length and variances for use during a generation.
    pub fn snapshot(&self) -> ArchiveSnapshot {
        ArchiveSnapshot { watermark: self.entries.len(), sigma2: self.sigma2() }
    }
}
