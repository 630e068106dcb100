use super::space::ObjectiveVector;

/// Pareto dominance for minimization: `a` dominates `b` iff `a` is no worse
/// in every objective and strictly better in at least one.
pub fn dominates(a: &ObjectiveVector, b: &ObjectiveVector) -> bool {
    assert_eq!(a.len(), b.len(), "objective dimension mismatch");
    let mut strictly_better = false;
    for (&ai, &bi) in a.iter().zip(b.iter()) {
        if ai > bi {
            return false;
        }
        if ai < bi {
            strictly_better = true;
        }
    }
    strictly_better
}

/// Indices of the non-dominated members of `points`.
///
/// Duplicates don't dominate each other, so every copy of a non-dominated
/// point is kept. Order of the input is preserved.
pub fn pareto_filter_indices(points: &[ObjectiveVector]) -> Vec<usize> {
    (0..points.len())
        .filter(|&i| !points.iter().any(|q| dominates(q, &points[i])))
        .collect()
}

/// The non-dominated subset of `points`, input order preserved.
pub fn pareto_filter(points: &[ObjectiveVector]) -> Vec<ObjectiveVector> {
    pareto_filter_indices(points).into_iter().map(|i| points[i].clone()).collect()
}
