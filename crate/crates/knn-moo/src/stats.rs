//! Statistical comparison of two approaches' per-run metric samples:
//! two-sided Mann-Whitney U for significance, Vargha-Delaney Â12 for effect
//! direction and size, combined into a ✓/✗/≡ verdict.

use statrs::distribution::{ContinuousCDF, Normal};

/// Two-sided Mann-Whitney U p-value.
///
/// Small tie-free inputs (combined size ≤ 20) use the exact permutation
/// distribution of U; everything else falls back to the normal approximation
/// with tie and continuity corrections. Two samples without any variation
/// at all yield p = 1.0.
pub fn mann_whitney_u(a: &[f64], b: &[f64]) -> f64 {
    assert!(a.len() >= 2 && b.len() >= 2, "need at least two observations per sample");
    if a.len() + b.len() <= 20 && !has_ties(a, b) {
        mann_whitney_u_exact(a, b)
    } else {
        mann_whitney_u_approx(a, b)
    }
}

fn has_ties(a: &[f64], b: &[f64]) -> bool {
    let mut all: Vec<f64> = a.iter().chain(b).copied().collect();
    all.sort_by(f64::total_cmp);
    all.windows(2).any(|w| w[0] == w[1])
}

/// U statistic of `a` over `b`: wins plus half the ties, over all pairs.
fn u_statistic(a: &[f64], b: &[f64]) -> f64 {
    let mut u = 0.0;
    for &x in a {
        for &y in b {
            if x > y {
                u += 1.0;
            } else if x == y {
                u += 0.5;
            }
        }
    }
    u
}

/// Number of ways to split `n + m` distinct values into samples of sizes
/// `n` and `m` such that the first sample's U statistic equals `u`,
/// by the standard recurrence on the largest remaining value: taken into
/// the first sample it beats all `m` current members of the second.
fn u_count(n: usize, m: usize, u: i64, memo: &mut Vec<Vec<Vec<Option<u64>>>>) -> u64 {
    if u < 0 {
        return 0;
    }
    if n == 0 || m == 0 {
        return u64::from(u == 0);
    }
    if let Some(v) = memo[n][m][u as usize] {
        return v;
    }
    let v = u_count(n - 1, m, u - m as i64, memo) + u_count(n, m - 1, u, memo);
    memo[n][m][u as usize] = Some(v);
    v
}

pub(crate) fn mann_whitney_u_exact(a: &[f64], b: &[f64]) -> f64 {
    let (n, m) = (a.len(), b.len());
    let u_a = u_statistic(a, b);
    // Tie-free, so both U statistics are integers.
    let u_b = (n * m) as f64 - u_a;
    let threshold = u_a.min(u_b) as i64;
    let mut memo = vec![vec![vec![None; n * m + 1]; m + 1]; n + 1];
    let below: u64 = (0..=threshold).map(|u| u_count(n, m, u, &mut memo)).sum();
    let total: u64 = (0..=(n * m) as i64).map(|u| u_count(n, m, u, &mut memo)).sum();
    (2.0 * below as f64 / total as f64).min(1.0)
}

pub(crate) fn mann_whitney_u_approx(a: &[f64], b: &[f64]) -> f64 {
    let (n, m) = (a.len() as f64, b.len() as f64);
    let big_n = n + m;
    let u_a = u_statistic(a, b);
    let u = u_a.max(n * m - u_a);

    // Tie correction over groups of equal values in the pooled sample.
    let mut all: Vec<f64> = a.iter().chain(b).copied().collect();
    all.sort_by(f64::total_cmp);
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < all.len() {
        let mut j = i + 1;
        while j < all.len() && all[j] == all[i] {
            j += 1;
        }
        let t = (j - i) as f64;
        tie_term += t * t * t - t;
        i = j;
    }
    let variance =
        n * m / 12.0 * ((big_n + 1.0) - tie_term / (big_n * (big_n - 1.0)));
    if variance <= 0.0 {
        // No variation anywhere: the samples cannot be distinguished.
        return 1.0;
    }
    let z = (u - n * m / 2.0 - 0.5) / variance.sqrt();
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    (2.0 * (1.0 - normal.cdf(z))).clamp(0.0, 1.0)
}

/// Vargha-Delaney Â12: probability that a random draw from `a` exceeds one
/// from `b`, counting ties half. 0.5 means no effect; above 0.5 means `a`
/// tends higher.
pub fn vargha_delaney_a12(a: &[f64], b: &[f64]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty(), "a12 needs non-empty samples");
    u_statistic(a, b) / (a.len() * b.len()) as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// The first approach is statistically better.
    App1Better,
    /// The second approach is statistically better.
    App2Better,
    /// No significant difference.
    Equivalent,
}

impl Verdict {
    pub fn symbol(&self) -> &'static str {
        match self {
            Verdict::App1Better => "✓",
            Verdict::App2Better => "✗",
            Verdict::Equivalent => "≡",
        }
    }
}

/// One metric's comparison between two approaches.
#[derive(Debug, Clone)]
pub struct ComparisonVerdict {
    pub metric: String,
    pub app1: String,
    pub app2: String,
    pub p_value: f64,
    pub a12: f64,
    pub verdict: Verdict,
    pub higher_is_better: bool,
}

/// Compare two samples of one metric. Significance is two-sided at `alpha`;
/// direction comes from Â12 against 0.5, with the polarity set by
/// `higher_is_better` (true for hypervolumes, false for ΔF).
pub fn compare(
    metric: impl Into<String>,
    app1: impl Into<String>,
    app2: impl Into<String>,
    samples1: &[f64],
    samples2: &[f64],
    alpha: f64,
    higher_is_better: bool,
) -> ComparisonVerdict {
    assert!(alpha > 0.0 && alpha < 1.0, "alpha must be in (0,1), got {alpha}");
    let p_value = mann_whitney_u(samples1, samples2);
    let a12 = vargha_delaney_a12(samples1, samples2);
    let verdict = if p_value >= alpha {
        Verdict::Equivalent
    } else if (a12 > 0.5) == higher_is_better {
        Verdict::App1Better
    } else {
        Verdict::App2Better
    };
    ComparisonVerdict {
        metric: metric.into(),
        app1: app1.into(),
        app2: app2.into(),
        p_value,
        a12,
        verdict,
        higher_is_better,
    }
}
