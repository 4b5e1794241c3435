//! Two-sided Wilcoxon rank-sum (Mann-Whitney) test.

use crate::ci::normal_upper_tail;

/// Both groups at most this large and no ties: exact null distribution.
pub const EXACT_MAX_GROUP: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WilcoxonMethod {
    Exact,
    NormalApprox,
}

impl WilcoxonMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            WilcoxonMethod::Exact => "exact",
            WilcoxonMethod::NormalApprox => "normal_approx",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WilcoxonResult {
    /// Sum of the (mid-)ranks of the first sample in the pooled sample.
    pub rank_sum_statistic: f64,
    pub p_value: f64,
    pub method: WilcoxonMethod,
}

/// Mid-ranks (1-based) of `values` and the tie groups' sizes.
pub fn mid_ranks(values: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut ranks = vec![0.0; values.len()];
    let mut ties = Vec::new();
    let mut i = 0;
    while i < idx.len() {
        let mut j = i + 1;
        while j < idx.len() && values[idx[j]] == values[idx[i]] {
            j += 1;
        }
        let r = (i + j + 1) as f64 / 2.0;
        for &k in &idx[i..j] {
            ranks[k] = r;
        }
        if j - i > 1 {
            ties.push(j - i);
        }
        i = j;
    }
    (ranks, ties)
}

/// Number of `k`-subsets of `{1..n}` with each possible sum, indexed by sum.
fn subset_sum_counts(n: usize, k: usize) -> Vec<u64> {
    let max_sum = n * (n + 1) / 2;
    // counts[j][s]: j-subsets of the ranks seen so far summing to s
    let mut counts = vec![vec![0u64; max_sum + 1]; k + 1];
    counts[0][0] = 1;
    for r in 1..=n {
        for j in (1..=k.min(r)).rev() {
            for s in (r..=max_sum).rev() {
                counts[j][s] += counts[j - 1][s - r];
            }
        }
    }
    counts.swap_remove(k)
}

/// Two-sided p-value `min(1, 2 min(P(W <= w), P(W >= w)))` from the exact
/// null distribution of the rank sum of a size-`n_a` group among `n_a + n_b`
/// untied observations.
pub fn exact_p_value(w: u64, n_a: usize, n_b: usize) -> f64 {
    let counts = subset_sum_counts(n_a + n_b, n_a);
    let total: u64 = counts.iter().sum();
    let w = w as usize;
    let lower: u64 = counts[..=w.min(counts.len() - 1)].iter().sum();
    let upper: u64 = counts.get(w..).map_or(0, |c| c.iter().sum());
    (2.0 * lower.min(upper) as f64 / total as f64).min(1.0)
}

pub fn wilcoxon_rank_sum(a: &[f64], b: &[f64]) -> Option<WilcoxonResult> {
    if a.is_empty() || b.is_empty() {
        return None;
    }
    let (n_a, n_b) = (a.len(), b.len());
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let (ranks, ties) = mid_ranks(&pooled);
    let w: f64 = ranks[..n_a].iter().sum();

    if ties.is_empty() && n_a <= EXACT_MAX_GROUP && n_b <= EXACT_MAX_GROUP {
        return Some(WilcoxonResult { rank_sum_statistic: w, p_value: exact_p_value(w as u64, n_a, n_b), method: WilcoxonMethod::Exact });
    }
    Some(WilcoxonResult { rank_sum_statistic: w, p_value: normal_p_value(w, n_a, n_b, &ties), method: WilcoxonMethod::NormalApprox })
}

/// Normal approximation with tie-corrected variance and a 0.5 continuity
/// correction toward the mean.
pub fn normal_p_value(w: f64, n_a: usize, n_b: usize, tie_sizes: &[usize]) -> f64 {
    let (na, nb) = (n_a as f64, n_b as f64);
    let n = na + nb;
    let mean = na * (n + 1.0) / 2.0;
    let tie_term: f64 = tie_sizes.iter().map(|&t| (t as f64).powi(3) - t as f64).sum();
    let var = na * nb / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)).max(1.0));
    if var <= 0.0 {
        return 1.0;
    }
    let z = ((w - mean).abs() - 0.5).max(0.0) / var.sqrt();
    (2.0 * normal_upper_tail(z)).min(1.0)
}
