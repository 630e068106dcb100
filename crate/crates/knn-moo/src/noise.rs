//! Fitness-assignment strategies for noisy evaluations.
//!
//! All three strategies spend a fixed per-individual share of the evaluation
//! budget and insert exactly one archive entry per assignment:
//!
//! * **Baseline** — one noisy observation, used as-is. Cost 1.
//! * **Repetition(n)** — n independent observations, averaged. Cost n.
//! * **Knn(k, max_sed)** — one noisy observation, averaged with the raw
//!   observations of up to k−1 archived neighbours within `max_sed`
//!   standardized distance units. Cost 1.
//!
//! `Knn { k: 1, .. }` never finds neighbours to average with and is exactly
//! the baseline.

use crate::core::{ArchiveSnapshot, Evaluation, EvaluationArchive, ObjectiveVector, SolutionVector};
use crate::error::{Error, Result};
use crate::problems::NoisyProblem;
use rand::RngCore;

#[derive(Debug, Clone, PartialEq)]
pub enum Strategy {
    Baseline,
    Repetition { n: u32 },
    Knn { k: u32, max_sed: f64 },
}

impl Strategy {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Strategy::Baseline => Ok(()),
            Strategy::Repetition { n } => {
                if n < 2 {
                    Err(Error::InvalidConfig {
                        field: "repetition.n".into(),
                        message: format!("must be ≥ 2 (use the baseline for n = 1), got {n}"),
                    })
                } else {
                    Ok(())
                }
            }
            Strategy::Knn { k, max_sed } => {
                if k < 1 {
                    Err(Error::InvalidConfig {
                        field: "knn.k".into(),
                        message: "must be ≥ 1".into(),
                    })
                } else if !(max_sed > 0.0) {
                    Err(Error::InvalidConfig {
                        field: "knn.max_sed".into(),
                        message: format!("must be > 0, got {max_sed}"),
                    })
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Evaluation budget consumed per individual.
    pub fn cost_per_individual(&self) -> u32 {
        match *self {
            Strategy::Repetition { n } => n,
            Strategy::Baseline | Strategy::Knn { .. } => 1,
        }
    }

    /// Display label: `B`, `Rep-5`, `kNN-Avg-10`, …
    pub fn label(&self) -> String {
        match *self {
            Strategy::Baseline => "B".into(),
            Strategy::Repetition { n } => format!("Rep-{n}"),
            Strategy::Knn { k, .. } => format!("kNN-Avg-{k}"),
        }
    }

    /// Evaluate `x` against a frozen archive view without mutating anything.
    ///
    /// `entries` must be the archive contents up to the snapshot watermark;
    /// neighbour distances use the snapshot's variances. The caller inserts
    /// the result into the live archive afterwards (in a deterministic
    /// order, when evaluations ran concurrently).
    pub fn evaluate(
        &self,
        problem: &dyn NoisyProblem,
        x: &SolutionVector,
        entries: &[Evaluation],
        sigma2: &[f64],
        rng: &mut dyn RngCore,
    ) -> StrategyEvaluation {
        match *self {
            Strategy::Baseline => {
                let raw = problem.noisy_eval(x, rng);
                StrategyEvaluation { assigned: raw.clone(), raw, cost: 1, neighbor_ids: vec![] }
            }
            Strategy::Repetition { n } => {
                let mut sum = problem.noisy_eval(x, rng).values;
                for _ in 1..n {
                    let o = problem.noisy_eval(x, rng);
                    for (s, v) in sum.iter_mut().zip(o.iter()) {
                        *s += v;
                    }
                }
                for s in sum.iter_mut() {
                    *s /= f64::from(n);
                }
                let mean = ObjectiveVector::new(sum);
                StrategyEvaluation {
                    raw: mean.clone(),
                    assigned: mean,
                    cost: n,
                    neighbor_ids: vec![],
                }
            }
            Strategy::Knn { k, max_sed } => {
                let raw = problem.noisy_eval(x, rng);
                let neighbors = knn_neighbors_among(entries, sigma2, x, k, max_sed);
                let assigned = if neighbors.is_empty() {
                    raw.clone()
                } else {
                    let count = (neighbors.len() + 1) as f64;
                    let values = (0..raw.len())
                        .map(|j| {
                            let sum: f64 =
                                raw[j] + neighbors.iter().map(|e| e.raw[j]).sum::<f64>();
                            sum / count
                        })
                        .collect();
                    ObjectiveVector::new(values)
                };
                let neighbor_ids = neighbors.iter().map(|e| e.id).collect();
                StrategyEvaluation { raw, assigned, cost: 1, neighbor_ids }
            }
        }
    }

    /// Evaluate `x`, insert the result into `archive`, and return the
    /// assigned fitness. Queries see the archive as it is on entry.
    pub fn assign_fitness(
        &self,
        problem: &dyn NoisyProblem,
        x: &SolutionVector,
        archive: &mut EvaluationArchive,
        generation: u32,
        rng: &mut dyn RngCore,
    ) -> ObjectiveVector {
        let snapshot = archive.snapshot();
        let result = self.evaluate(problem, x, archive.entries(), &snapshot.sigma2, rng);
        archive.push(x.clone(), result.raw, result.assigned.clone(), generation, result.cost);
        result.assigned
    }
}

/// One strategy evaluation, not yet archived.
#[derive(Debug, Clone)]
pub struct StrategyEvaluation {
    pub raw: ObjectiveVector,
    pub assigned: ObjectiveVector,
    pub cost: u32,
    /// Archive ids averaged into `assigned` (empty for baseline/repetition).
    pub neighbor_ids: Vec<u64>,
}

/// Standardized Euclidean distance: per-dimension differences scaled by the
/// dimension's standard deviation, `√(Σ (x1_i − x2_i)² / σ_i²)`.
pub fn sed(x1: &SolutionVector, x2: &SolutionVector, sigma2: &[f64]) -> f64 {
    assert_eq!(x1.len(), x2.len(), "solution dimension mismatch");
    assert_eq!(x1.len(), sigma2.len(), "sigma2 dimension mismatch");
    x1.iter()
        .zip(x2.iter())
        .zip(sigma2)
        .map(|((a, b), s2)| (a - b) * (a - b) / s2)
        .sum::<f64>()
        .sqrt()
}

/// Up to `k − 1` archived entries nearest to `x` by standardized Euclidean
/// distance, excluding entries farther than `max_sed` (entries at exactly
/// `max_sed` stay in). Distance ties break toward the lower id. Sorted by
/// ascending distance.
pub fn knn_neighbors<'a>(
    archive: &'a EvaluationArchive,
    x: &SolutionVector,
    k: u32,
    max_sed: f64,
) -> Vec<&'a Evaluation> {
    knn_neighbors_among(archive.entries(), &archive.sigma2(), x, k, max_sed)
}

/// As [`knn_neighbors`], but over an explicit archive view — used by the
/// optimizer to query a generation-start snapshot.
pub fn knn_neighbors_among<'a>(
    entries: &'a [Evaluation],
    sigma2: &[f64],
    x: &SolutionVector,
    k: u32,
    max_sed: f64,
) -> Vec<&'a Evaluation> {
    if k <= 1 || entries.is_empty() {
        return Vec::new();
    }
    let mut candidates: Vec<(f64, &Evaluation)> = entries
        .iter()
        .map(|e| (sed(&e.solution, x, sigma2), e))
        .filter(|(d, _)| *d <= max_sed)
        .collect();
    candidates.sort_by(|(da, ea), (db, eb)| da.total_cmp(db).then(ea.id.cmp(&eb.id)));
    candidates.truncate(k as usize - 1);
    candidates.into_iter().map(|(_, e)| e).collect()
}

/// Convenience for the optimizer: the slice of archive entries a snapshot
/// covers.
pub fn snapshot_entries<'a>(
    archive: &'a EvaluationArchive,
    snapshot: &ArchiveSnapshot,
) -> &'a [Evaluation] {
    &archive.entries()[..snapshot.watermark]
}

#[cfg(test)]
mod tests {
    use super::*;
    // The explicit import wins over both globs; proptest's `Strategy` trait
    // would otherwise collide with ours.
    use super::Strategy;
    use crate::problems::testutil::ConstProblem;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sv(v: &[f64]) -> SolutionVector {
        SolutionVector::new(v.to_vec())
    }

    fn seed_archive_1d(points: &[f64]) -> EvaluationArchive {
        let mut a = EvaluationArchive::new(1);
        for &p in points {
            let obj = ObjectiveVector::new(vec![p, 0.0]);
            a.push(sv(&[p]), obj.clone(), obj, 0, 1);
        }
        a
    }

    #[test]
    fn sed_examples() {
        assert_eq!(sed(&sv(&[1.0, 2.0]), &sv(&[1.0, 2.0]), &[4.0, 9.0]), 0.0);
        assert_eq!(sed(&sv(&[0.0, 0.0]), &sv(&[3.0, 4.0]), &[1.0, 1.0]), 5.0);
        let d = sed(&sv(&[0.0, 0.0]), &sv(&[3.0, 4.0]), &[9.0, 16.0]);
        assert!((d - std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn sed_is_symmetric_and_positive(
            a in proptest::collection::vec(-50.0..50.0f64, 3),
            b in proptest::collection::vec(-50.0..50.0f64, 3),
            s in proptest::collection::vec(0.1..10.0f64, 3),
        ) {
            let (a, b) = (sv(&a), sv(&b));
            let d_ab = sed(&a, &b, &s);
            let d_ba = sed(&b, &a, &s);
            prop_assert_eq!(d_ab, d_ba);
            prop_assert!(d_ab >= 0.0);
            if a != b {
                prop_assert!(d_ab > 0.0);
            }
        }
    }

    #[test]
    fn neighbors_of_empty_archive() {
        let a = EvaluationArchive::new(1);
        assert!(knn_neighbors(&a, &sv(&[0.0]), 5, f64::INFINITY).is_empty());
    }

    #[test]
    fn k1_never_returns_neighbors() {
        let a = seed_archive_1d(&[0.0, 1.0, 10.0]);
        assert!(knn_neighbors(&a, &sv(&[0.4]), 1, f64::INFINITY).is_empty());
    }

    #[test]
    fn nearest_two_of_three() {
        let a = seed_archive_1d(&[0.0, 1.0, 10.0]);
        let n = knn_neighbors(&a, &sv(&[0.4]), 3, f64::INFINITY);
        assert_eq!(n.iter().map(|e| e.id).collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn max_sed_boundary_is_inclusive() {
        let entries = seed_archive_1d(&[2.0, 2.5]);
        // Explicit unit variances make sed equal the plain distance.
        let n = knn_neighbors_among(entries.entries(), &[1.0], &sv(&[0.0]), 5, 2.0);
        assert_eq!(n.len(), 1);
        assert_eq!(n[0].id, 0);
    }

    #[test]
    fn distance_ties_break_toward_lower_id() {
        let a = seed_archive_1d(&[3.0, 3.0, 3.0]);
        let n = knn_neighbors_among(a.entries(), &[1.0], &sv(&[0.0]), 3, f64::INFINITY);
        assert_eq!(n.iter().map(|e| e.id).collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn baseline_assigns_the_raw_observation() {
        let p = ConstProblem::new(vec![2.0, 7.0], 0.5);
        let mut archive = EvaluationArchive::new(1);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let assigned =
            Strategy::Baseline.assign_fitness(&p, &sv(&[0.0]), &mut archive, 0, &mut rng);
        assert_eq!(archive.len(), 1);
        let e = &archive.entries()[0];
        assert_eq!(e.assigned, assigned);
        assert_eq!(e.raw, assigned);
        assert_eq!(e.cost, 1);
    }

    #[test]
    fn knn_averages_raw_neighbor_values() {
        // Neighbours at raw (0,0) and (4,4) plus a fresh noise-free draw of
        // (2,2) must average to exactly (2,2).
        let p = ConstProblem::new(vec![2.0, 2.0], 0.0);
        let mut archive = EvaluationArchive::new(1);
        for (x, r) in [(0.1, 0.0), (-0.1, 4.0)] {
            let obj = ObjectiveVector::new(vec![r, r]);
            archive.push(sv(&[x]), obj.clone(), obj, 0, 1);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let strat = Strategy::Knn { k: 3, max_sed: f64::INFINITY };
        let assigned = strat.assign_fitness(&p, &sv(&[0.0]), &mut archive, 1, &mut rng);
        assert_eq!(assigned.values, vec![2.0, 2.0]);
        // Raw stays the observation, assigned the smoothed value.
        assert_eq!(archive.entries()[2].raw.values, vec![2.0, 2.0]);
        assert_eq!(archive.entries()[2].cost, 1);
    }

    #[test]
    fn knn_k1_is_bitwise_baseline() {
        let p = ConstProblem::new(vec![5.0, 1.0], 1.0);
        let x = sv(&[0.3]);
        let mut archive_b = seed_archive_1d(&[0.0, 0.5, 1.0]);
        let mut archive_k = archive_b.clone();
        let mut rng_b = ChaCha8Rng::seed_from_u64(77);
        let mut rng_k = ChaCha8Rng::seed_from_u64(77);
        for g in 0..20 {
            let b = Strategy::Baseline.assign_fitness(&p, &x, &mut archive_b, g, &mut rng_b);
            let k = Strategy::Knn { k: 1, max_sed: 2.0 }
                .assign_fitness(&p, &x, &mut archive_k, g, &mut rng_k);
            assert_eq!(b, k);
        }
        assert_eq!(archive_b.len(), archive_k.len());
        for (eb, ek) in archive_b.entries().iter().zip(archive_k.entries()) {
            assert_eq!(eb.raw, ek.raw);
            assert_eq!(eb.assigned, ek.assigned);
            assert_eq!(eb.cost, ek.cost);
        }
    }

    #[test]
    fn repetition_on_noise_free_problem_is_exact() {
        let p = ConstProblem::new(vec![2.0, 0.25], 0.0);
        let mut archive = EvaluationArchive::new(1);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let strat = Strategy::Repetition { n: 5 };
        let assigned = strat.assign_fitness(&p, &sv(&[0.0]), &mut archive, 0, &mut rng);
        assert_eq!(assigned.values, vec![2.0, 0.25]);
        assert_eq!(archive.entries()[0].cost, 5);
        assert_eq!(archive.total_cost(), 5);
    }

    #[test]
    fn repetition_std_shrinks_like_sqrt_n() {
        let sigma = 1.0;
        let n_rep = 5u32;
        let p = ConstProblem::new(vec![10.0, 10.0], sigma);
        let x = sv(&[0.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let strat = Strategy::Repetition { n: n_rep };
        let trials = 1000;
        let mut archive = EvaluationArchive::new(1);
        let vals: Vec<f64> = (0..trials)
            .map(|_| strat.assign_fitness(&p, &x, &mut archive, 0, &mut rng)[0])
            .collect();
        let mean = vals.iter().sum::<f64>() / trials as f64;
        let std = (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>()
            / (trials as f64 - 1.0))
            .sqrt();
        let expected = sigma / f64::from(n_rep).sqrt();
        assert!(
            (std - expected).abs() < 0.15 * expected,
            "std {std} vs σ/√n {expected}"
        );
    }

    #[test]
    fn knn_reduces_assigned_variance_vs_baseline() {
        // Repeatedly evaluating the same point: the smoothed fitness must
        // scatter strictly less than single observations. Five independent
        // seeds, all must show the reduction.
        for seed in [100, 200, 300, 400, 500u64] {
            let sigma = 1.0;
            let p = ConstProblem::new(vec![0.0, 0.0], sigma);
            let x = sv(&[0.0]);
            let variance_of = |strategy: Strategy, seed: u64| -> f64 {
                let mut archive = EvaluationArchive::new(1);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let vals: Vec<f64> = (0..1000)
                    .map(|_| strategy.assign_fitness(&p, &x, &mut archive, 0, &mut rng)[0])
                    .collect();
                let mean = vals.iter().sum::<f64>() / vals.len() as f64;
                vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (vals.len() as f64 - 1.0)
            };
            let v_base = variance_of(Strategy::Baseline, seed);
            let v_knn = variance_of(Strategy::Knn { k: 10, max_sed: f64::INFINITY }, seed);
            assert!(
                v_knn < v_base,
                "seed {seed}: knn variance {v_knn} not below baseline {v_base}"
            );
        }
    }

    #[test]
    fn out_of_range_neighbors_leave_observation_untouched() {
        let p = ConstProblem::new(vec![3.0, 3.0], 0.0);
        let mut archive = EvaluationArchive::new(1);
        // Far-away entries with wild raw values; variance of the archive is
        // dominated by the spread, but sed to x=0 still exceeds max_sed.
        for x in [100.0, -100.0, 101.0, -101.0] {
            let obj = ObjectiveVector::new(vec![1000.0, 1000.0]);
            archive.push(sv(&[x]), obj.clone(), obj, 0, 1);
        }
        let snapshot = archive.snapshot();
        // sed from 0 to ±100ish with σ ≈ 100 is ≈ 1; pick max_sed below it.
        let strat = Strategy::Knn { k: 5, max_sed: 0.5 };
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let result =
            strat.evaluate(&p, &sv(&[0.0]), archive.entries(), &snapshot.sigma2, &mut rng);
        assert!(result.neighbor_ids.is_empty());
        assert_eq!(result.assigned.values, vec![3.0, 3.0]);
    }

    proptest! {
        // The assigned value must be reconstructible as the unweighted mean
        // of the new raw observation and the raw (never assigned) values of
        // an independently re-ranked neighbour set.
        #[test]
        fn knn_assigned_is_mean_over_raw_values_only(
            points in proptest::collection::vec((-5.0..5.0f64, -5.0..5.0f64), 2..20),
            query in -5.0..5.0f64,
            k in 1u32..8,
            seed in 0u64..1000,
        ) {
            let p = ConstProblem::new(vec![1.0, -1.0], 1.0);
            let mut archive = EvaluationArchive::new(1);
            for (x, r) in &points {
                // Assigned values are poisoned so any recursive smoothing
                // would show up immediately.
                let raw = ObjectiveVector::new(vec![*r, -*r]);
                let poisoned = ObjectiveVector::new(vec![1e9, 1e9]);
                archive.push(sv(&[*x]), raw, poisoned, 0, 1);
            }
            let snapshot = archive.snapshot();
            let strat = Strategy::Knn { k, max_sed: 2.0 };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = sv(&[query]);
            let result =
                strat.evaluate(&p, &x, archive.entries(), &snapshot.sigma2, &mut rng);

            // Independent oracle: rank by sed with the same variances.
            let mut ranked: Vec<(f64, u64)> = archive
                .entries()
                .iter()
                .map(|e| (sed(&e.solution, &x, &snapshot.sigma2), e.id))
                .filter(|(d, _)| *d <= 2.0)
                .collect();
            ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            ranked.truncate(k as usize - 1);
            let expected_ids: Vec<u64> = ranked.iter().map(|(_, id)| *id).collect();
            prop_assert_eq!(&result.neighbor_ids, &expected_ids);

            for j in 0..2 {
                let mut sum = result.raw[j];
                for id in &expected_ids {
                    sum += archive.entries()[*id as usize].raw[j];
                }
                let mean = sum / (expected_ids.len() + 1) as f64;
                prop_assert!((result.assigned[j] - mean).abs() < 1e-12);
                prop_assert!(result.assigned[j].abs() < 1e6,
                    "assigned leaked a poisoned smoothed value");
            }
        }
    }

    #[test]
    fn validation_rejects_bad_parameters() {
        assert!(Strategy::Repetition { n: 1 }.validate().is_err());
        assert!(Strategy::Knn { k: 0, max_sed: 2.0 }.validate().is_err());
        assert!(Strategy::Knn { k: 10, max_sed: 0.0 }.validate().is_err());
        assert!(Strategy::Knn { k: 10, max_sed: f64::NAN }.validate().is_err());
        assert!(Strategy::Baseline.validate().is_ok());
        assert!(Strategy::Repetition { n: 2 }.validate().is_ok());
        assert!(Strategy::Knn { k: 1, max_sed: 2.0 }.validate().is_ok());
    }

    #[test]
    fn labels() {
        assert_eq!(Strategy::Baseline.label(), "B");
        assert_eq!(Strategy::Repetition { n: 5 }.label(), "Rep-5");
        assert_eq!(Strategy::Knn { k: 10, max_sed: 2.0 }.label(), "kNN-Avg-10");
    }

    #[test]
    fn costs() {
        assert_eq!(Strategy::Baseline.cost_per_individual(), 1);
        assert_eq!(Strategy::Repetition { n: 5 }.cost_per_individual(), 5);
        assert_eq!(Strategy::Knn { k: 50, max_sed: 2.0 }.cost_per_individual(), 1);
    }
}
