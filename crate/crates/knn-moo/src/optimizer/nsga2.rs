use super::Individual;
use crate::core::{dominates, ObjectiveVector};
use rand::Rng;

/// Partition the population into non-domination fronts and write each
/// individual's front index into its `rank` field.
///
/// Returns the fronts as ascending index lists: front 0 is the non-dominated
/// set; front k is what becomes non-dominated once fronts < k are removed.
pub fn fast_non_dominated_sort(pop: &mut [Individual]) -> Vec<Vec<usize>> {
    assert!(!pop.is_empty(), "cannot sort an empty population");
    let n = pop.len();
    let mut dominated_by_me: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut dominator_count = vec![0usize; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && dominates(&pop[i].fitness, &pop[j].fitness) {
                dominated_by_me[i].push(j);
                dominator_count[j] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| dominator_count[i] == 0).collect();
    let mut rank = 0;
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            pop[i].rank = rank;
            for &j in &dominated_by_me[i] {
                dominator_count[j] -= 1;
                if dominator_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(std::mem::replace(&mut current, next));
        rank += 1;
    }
    fronts
}

/// Crowding distance of each point within one front.
///
/// Boundary points per objective get +∞; interior points sum
/// `(next − prev) / (max − min)` over the objectives. Objectives with zero
/// range contribute nothing.
// `j` is a column (objective) index, not a row iterator.
#[allow(clippy::needless_range_loop)]
pub fn crowding_distance(fitnesses: &[ObjectiveVector]) -> Vec<f64> {
    let n = fitnesses.len();
    if n == 0 {
        return Vec::new();
    }
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let m = fitnesses[0].len();
    let mut distance = vec![0.0f64; n];
    for j in 0..m {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| fitnesses[a][j].total_cmp(&fitnesses[b][j]).then(a.cmp(&b)));
        let lo = fitnesses[order[0]][j];
        let hi = fitnesses[order[n - 1]][j];
        distance[order[0]] = f64::INFINITY;
        distance[order[n - 1]] = f64::INFINITY;
        let range = hi - lo;
        if range <= 0.0 {
            continue;
        }
        for p in 1..n - 1 {
            let i = order[p];
            if distance[i].is_finite() {
                distance[i] += (fitnesses[order[p + 1]][j] - fitnesses[order[p - 1]][j]) / range;
            }
        }
    }
    distance
}

/// Sort the population into fronts and fill in both rank and crowding.
pub(super) fn rank_population(pop: &mut [Individual]) {
    let fronts = fast_non_dominated_sort(pop);
    for front in &fronts {
        let fitnesses: Vec<ObjectiveVector> =
            front.iter().map(|&i| pop[i].fitness.clone()).collect();
        let crowding = crowding_distance(&fitnesses);
        for (c, &i) in crowding.iter().zip(front) {
            pop[i].crowding = *c;
        }
    }
}

/// Index of the winner between two uniformly drawn individuals: lower rank
/// first, larger crowding on rank ties, the first-drawn on full ties.
pub fn binary_tournament<R: Rng + ?Sized>(pop: &[Individual], rng: &mut R) -> usize {
    let i = rng.random_range(0..pop.len());
    let j = rng.random_range(0..pop.len());
    tournament_winner(pop, i, j)
}

fn tournament_winner(pop: &[Individual], i: usize, j: usize) -> usize {
    let (a, b) = (&pop[i], &pop[j]);
    if a.rank != b.rank {
        return if a.rank < b.rank { i } else { j };
    }
    match a.crowding.total_cmp(&b.crowding) {
        std::cmp::Ordering::Less => j,
        _ => i,
    }
}

/// NSGA-II survivor selection: fill by ascending front, truncating the last
/// front by descending crowding (index order on ties). Survivors keep their
/// merged-population rank and crowding for the next tournament round.
pub fn environmental_selection(mut merged: Vec<Individual>, target: usize) -> Vec<Individual> {
    assert!(
        target <= merged.len(),
        "cannot select {target} from {}",
        merged.len()
    );
    let fronts = fast_non_dominated_sort(&mut merged);
    for front in &fronts {
        let fitnesses: Vec<ObjectiveVector> =
            front.iter().map(|&i| merged[i].fitness.clone()).collect();
        let crowding = crowding_distance(&fitnesses);
        for (c, &i) in crowding.iter().zip(front) {
            merged[i].crowding = *c;
        }
    }
    let mut chosen: Vec<usize> = Vec::with_capacity(target);
    for front in &fronts {
        if chosen.len() == target {
            break;
        }
        if chosen.len() + front.len() <= target {
            chosen.extend(front);
        } else {
            let mut tail = front.clone();
            tail.sort_by(|&a, &b| {
                merged[b].crowding.total_cmp(&merged[a].crowding).then(a.cmp(&b))
            });
            tail.truncate(target - chosen.len());
            chosen.extend(tail);
        }
    }
    chosen.into_iter().map(|i| merged[i].clone()).collect()
}
