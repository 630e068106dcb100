//! Front quality indicators.
//!
//! A finished run is assessed twice: once on the objective values the search
//! believed (`hv_pred`), and once on *effective* values — the mean of many
//! fresh noisy re-evaluations of the same solutions (`hv_eff`). The gap
//! between the two fronts, averaged per solution, is `delta_f`. Post-hoc
//! re-evaluations never count against the search budget.

use crate::core::{pareto_filter, ObjectiveVector, SolutionVector};
use crate::error::{Error, Result};
use crate::optimizer::RunOutput;
use crate::problems::NoisyProblem;
use crate::seeding::derive_seed;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Exact dominated area between a two-objective front and a reference point.
///
/// Points not strictly below the reference in both objectives contribute
/// nothing. The area is the union of the rectangles spanned by each
/// remaining point and the reference, computed by a staircase sweep over
/// the first objective.
pub fn hypervolume_2d(front: &[ObjectiveVector], reference: &ObjectiveVector) -> f64 {
    try_hypervolume_2d(front, reference).expect("two-objective fronts only")
}

/// As [`hypervolume_2d`], surfacing the dimension check as an error instead
/// of a panic.
pub fn try_hypervolume_2d(front: &[ObjectiveVector], reference: &ObjectiveVector) -> Result<f64> {
    if reference.len() != 2 {
        return Err(Error::UnsupportedDimension {
            requested: reference.len(),
            reason: "hypervolume is implemented for exactly two objectives".into(),
        });
    }
    for p in front {
        if p.len() != 2 {
            return Err(Error::UnsupportedDimension {
                requested: p.len(),
                reason: "front point dimension must match the reference".into(),
            });
        }
    }
    let contributing: Vec<ObjectiveVector> = front
        .iter()
        .filter(|p| p[0] < reference[0] && p[1] < reference[1])
        .cloned()
        .collect();
    if contributing.is_empty() {
        return Ok(0.0);
    }
    let mut points = pareto_filter(&contributing);
    points.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut area = 0.0;
    let mut upper = reference[1];
    for p in &points {
        // Duplicates leave upper unchanged and add zero area.
        area += (reference[0] - p[0]) * (upper - p[1]).max(0.0);
        upper = upper.min(p[1]);
    }
    Ok(area)
}

/// Component-wise mean of `reps` fresh noisy evaluations of `x`.
pub fn effective_objectives(
    problem: &dyn NoisyProblem,
    x: &SolutionVector,
    reps: u32,
    rng: &mut dyn RngCore,
) -> ObjectiveVector {
    assert!(reps >= 1, "effective objectives need at least one repetition");
    let mut sum = problem.noisy_eval(x, rng).values;
    for _ in 1..reps {
        let o = problem.noisy_eval(x, rng);
        for (s, v) in sum.iter_mut().zip(o.iter()) {
            *s += v;
        }
    }
    for s in sum.iter_mut() {
        *s /= f64::from(reps);
    }
    ObjectiveVector::new(sum)
}

/// Mean Euclidean distance between aligned predicted and effective
/// objective vectors.
pub fn delta_f(predicted: &[ObjectiveVector], effective: &[ObjectiveVector]) -> Result<f64> {
    assert_eq!(predicted.len(), effective.len(), "front alignment broken");
    if predicted.is_empty() {
        return Err(Error::EmptyFront { context: "delta_f over an empty front".into() });
    }
    let total: f64 = predicted.iter().zip(effective).map(|(p, e)| p.distance(e)).sum();
    Ok(total / predicted.len() as f64)
}

/// Everything the reporting layer needs about one finished run.
#[derive(Debug, Clone)]
pub struct FrontAssessment {
    /// The predicted front: solutions with the objective values the search
    /// assigned them.
    pub predicted: Vec<(SolutionVector, ObjectiveVector)>,
    /// The same solutions with their effective (re-evaluated) objectives,
    /// index-aligned with `predicted`.
    pub effective: Vec<(SolutionVector, ObjectiveVector)>,
    pub hv_pred: f64,
    pub hv_eff: f64,
    pub delta_f: f64,
    pub reference_point: ObjectiveVector,
    pub effective_repetitions: u32,
}

/// Re-evaluate a run's predicted front and compute all indicators.
///
/// Each front solution gets its own rng substream derived from `seed`, so
/// the assessment is deterministic and independent of evaluation order.
pub fn assess(
    run: &RunOutput,
    problem: &dyn NoisyProblem,
    reference: &ObjectiveVector,
    effective_reps: u32,
    seed: u64,
) -> Result<FrontAssessment> {
    if run.predicted_front.is_empty() {
        return Err(Error::EmptyFront { context: "run produced an empty predicted front".into() });
    }
    let predicted: Vec<(SolutionVector, ObjectiveVector)> = run
        .predicted_front
        .iter()
        .map(|i| (i.solution.clone(), i.fitness.clone()))
        .collect();
    let effective: Vec<(SolutionVector, ObjectiveVector)> = predicted
        .iter()
        .enumerate()
        .map(|(i, (x, _))| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &format!("effective/{i}")));
            (x.clone(), effective_objectives(problem, x, effective_reps, &mut rng))
        })
        .collect();
    let predicted_objectives: Vec<ObjectiveVector> =
        predicted.iter().map(|(_, o)| o.clone()).collect();
    let effective_objectives_list: Vec<ObjectiveVector> =
        effective.iter().map(|(_, o)| o.clone()).collect();
    let hv_pred = try_hypervolume_2d(&pareto_filter(&predicted_objectives), reference)?;
    let hv_eff = try_hypervolume_2d(&pareto_filter(&effective_objectives_list), reference)?;
    let delta_f = delta_f(&predicted_objectives, &effective_objectives_list)?;
    Ok(FrontAssessment {
        predicted,
        effective,
        hv_pred,
        hv_eff,
        delta_f,
        reference_point: reference.clone(),
        effective_repetitions: effective_reps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::Strategy;
    use crate::optimizer::{run, GAConfig};
    use crate::problems::NoisyZdt1;
    use proptest::prelude::*;
    use rand::Rng;

    fn ov(v: &[f64]) -> ObjectiveVector {
        ObjectiveVector::new(v.to_vec())
    }

    #[test]
    fn single_rectangle() {
        let hv = hypervolume_2d(&[ov(&[0.5, 0.5])], &ov(&[1.0, 1.0]));
        assert_eq!(hv, 0.25);
    }

    #[test]
    fn point_at_reference_contributes_nothing() {
        assert_eq!(hypervolume_2d(&[ov(&[1.0, 1.0])], &ov(&[1.0, 1.0])), 0.0);
        assert_eq!(hypervolume_2d(&[ov(&[0.5, 1.2])], &ov(&[1.0, 1.0])), 0.0);
        assert_eq!(hypervolume_2d(&[], &ov(&[1.0, 1.0])), 0.0);
    }

    #[test]
    fn two_point_staircase() {
        let hv = hypervolume_2d(&[ov(&[0.25, 0.75]), ov(&[0.75, 0.25])], &ov(&[1.0, 1.0]));
        assert!((hv - 0.3125).abs() < 1e-15, "hv = {hv}");
    }

    #[test]
    fn non_two_dimensional_input_is_an_error() {
        assert!(try_hypervolume_2d(&[ov(&[1.0, 2.0, 3.0])], &ov(&[4.0, 4.0, 4.0])).is_err());
        assert!(try_hypervolume_2d(&[ov(&[1.0, 2.0])], &ov(&[4.0])).is_err());
    }

    #[test]
    fn duplicates_add_nothing() {
        let once = hypervolume_2d(&[ov(&[0.3, 0.4])], &ov(&[1.0, 1.0]));
        let twice =
            hypervolume_2d(&[ov(&[0.3, 0.4]), ov(&[0.3, 0.4])], &ov(&[1.0, 1.0]));
        assert_eq!(once, twice);
    }

    proptest! {
        #[test]
        fn hv_is_permutation_invariant(
            pts in proptest::collection::vec((0.0..1.0f64, 0.0..1.0f64), 1..15),
            rotate in 0usize..15,
        ) {
            let front: Vec<ObjectiveVector> =
                pts.iter().map(|(a, b)| ov(&[*a, *b])).collect();
            let mut rotated = front.clone();
            rotated.rotate_left(rotate % front.len().max(1));
            let r = ov(&[1.0, 1.0]);
            prop_assert_eq!(hypervolume_2d(&front, &r), hypervolume_2d(&rotated, &r));
        }

        #[test]
        fn hv_ignores_dominated_points(
            pts in proptest::collection::vec((0.0..0.9f64, 0.0..0.9f64), 1..10),
            extra in (0.0..0.1f64, 0.0..0.1f64),
        ) {
            let mut front: Vec<ObjectiveVector> =
                pts.iter().map(|(a, b)| ov(&[*a, *b])).collect();
            let r = ov(&[1.0, 1.0]);
            let base = hypervolume_2d(&front, &r);
            // Add a point dominated by front[0].
            let dominated = ov(&[front[0][0] + extra.0 + 0.05, front[0][1] + extra.1 + 0.05]);
            front.push(dominated);
            prop_assert_eq!(hypervolume_2d(&front, &r), base);
        }

        #[test]
        fn hv_is_monotone_under_added_points(
            pts in proptest::collection::vec((0.0..1.0f64, 0.0..1.0f64), 2..15),
        ) {
            let front: Vec<ObjectiveVector> =
                pts.iter().map(|(a, b)| ov(&[*a, *b])).collect();
            let r = ov(&[1.0, 1.0]);
            let without = hypervolume_2d(&front[..front.len() - 1], &r);
            let with = hypervolume_2d(&front, &r);
            prop_assert!(with >= without - 1e-15);
        }
    }

    #[test]
    fn hv_agrees_with_monte_carlo() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let reference = ov(&[1.0, 1.0]);
        for _ in 0..5 {
            let front: Vec<ObjectiveVector> = (0..rng.random_range(1..12))
                .map(|_| ov(&[rng.random::<f64>(), rng.random::<f64>()]))
                .collect();
            let exact = hypervolume_2d(&front, &reference);
            let samples = 200_000;
            let hits = (0..samples)
                .filter(|_| {
                    let (sx, sy) = (rng.random::<f64>(), rng.random::<f64>());
                    front.iter().any(|p| p[0] <= sx && p[1] <= sy)
                })
                .count();
            let mc = hits as f64 / samples as f64;
            assert!(
                (exact - mc).abs() <= 0.02 * exact.max(0.05),
                "exact {exact} vs monte-carlo {mc}"
            );
        }
    }

    #[test]
    fn effective_objectives_zero_noise_is_exact() {
        let p = NoisyZdt1::new(5, (0.0, 0.0)).unwrap();
        let x = SolutionVector::new(vec![0.4, 0.1, 0.0, 0.3, 0.2]);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let eff = effective_objectives(&p, &x, 30, &mut rng);
        let truth = p.true_eval(&x);
        assert!((eff[0] - truth[0]).abs() < 1e-12);
        assert!((eff[1] - truth[1]).abs() < 1e-12);
    }

    #[test]
    fn effective_objectives_converge_to_truth() {
        let p = NoisyZdt1::default();
        let x = SolutionVector::new(vec![0.5; 10]);
        let truth = p.true_eval(&x);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let reps = 10_000u32;
        let eff = effective_objectives(&p, &x, reps, &mut rng);
        let tol = 4.0 * 0.05 / f64::from(reps).sqrt();
        assert!((eff[0] - truth[0]).abs() < tol);
        assert!((eff[1] - truth[1]).abs() < tol);
    }

    #[test]
    fn delta_f_examples() {
        let a = [ov(&[1.0, 2.0]), ov(&[3.0, 4.0])];
        assert_eq!(delta_f(&a, &a).unwrap(), 0.0);
        assert_eq!(delta_f(&[ov(&[0.0, 0.0])], &[ov(&[3.0, 4.0])]).unwrap(), 5.0);
        let pred = [ov(&[0.0, 0.0]), ov(&[0.0, 0.0])];
        let eff = [ov(&[1.0, 0.0]), ov(&[0.0, 3.0])];
        assert_eq!(delta_f(&pred, &eff).unwrap(), 2.0);
    }

    #[test]
    fn delta_f_of_empty_front_is_an_error() {
        assert!(delta_f(&[], &[]).is_err());
    }

    #[test]
    fn assess_zero_noise_degenerates() {
        let p = NoisyZdt1::new(10, (0.0, 0.0)).unwrap();
        let out = run(&p, &Strategy::Baseline, &GAConfig::new(10, 200, 5)).unwrap();
        let a = assess(&out, &p, &p.default_reference_point(), 30, 99).unwrap();
        // Averaging 30 bit-identical evaluations still rounds (sum/n ≠ v
        // exactly), so the degenerate case agrees to accumulation precision.
        assert!(
            (a.hv_pred - a.hv_eff).abs() <= 1e-12 * a.hv_pred.max(1.0),
            "{} vs {}",
            a.hv_pred,
            a.hv_eff
        );
        assert!(a.delta_f <= 1e-12, "{}", a.delta_f);
        assert_eq!(a.predicted.len(), a.effective.len());
        for ((xs, _), (xe, _)) in a.predicted.iter().zip(&a.effective) {
            assert_eq!(xs, xe);
        }
    }

    #[test]
    fn assess_is_deterministic_in_the_seed() {
        let p = NoisyZdt1::default();
        let out = run(&p, &Strategy::Baseline, &GAConfig::new(10, 200, 6)).unwrap();
        let reference = p.default_reference_point();
        let a = assess(&out, &p, &reference, 30, 42).unwrap();
        let b = assess(&out, &p, &reference, 30, 42).unwrap();
        assert_eq!(a.hv_eff, b.hv_eff);
        assert_eq!(a.delta_f, b.delta_f);
        let c = assess(&out, &p, &reference, 30, 43).unwrap();
        assert_ne!(a.hv_eff, c.hv_eff, "different assessment seeds must differ");
    }

    #[test]
    fn filtering_dominated_points_leaves_hv_unchanged() {
        let front = [ov(&[0.2, 0.8]), ov(&[0.5, 0.5]), ov(&[0.6, 0.9]), ov(&[0.8, 0.2])];
        let r = ov(&[1.0, 1.0]);
        let full = hypervolume_2d(&front, &r);
        let filtered = hypervolume_2d(&pareto_filter(&front), &r);
        assert_eq!(full, filtered);
    }

    #[test]
    fn noisy_baseline_inflates_predicted_hypervolume() {
        // Single noisy draws let lucky observations onto the front, so the
        // predicted hypervolume should overstate the re-evaluated one in
        // nearly every run.
        let p = NoisyZdt1::default();
        let reference = p.default_reference_point();
        let mut inflated = 0;
        for seed in 0..10u64 {
            let out = run(&p, &Strategy::Baseline, &GAConfig::new(10, 300, seed)).unwrap();
            let a = assess(&out, &p, &reference, 30, derive_seed(seed, "assess")).unwrap();
            if a.hv_pred > a.hv_eff {
                inflated += 1;
            }
        }
        assert!(inflated >= 9, "hv_pred > hv_eff in only {inflated}/10 runs");
    }
}
