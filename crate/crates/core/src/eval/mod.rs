//! Scoring learned graphs against the truth and comparing score samples.

mod wilcoxon;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::{Dag, Pdag, UndirectedGraph};

pub use wilcoxon::{exact_p_value, mid_ranks, normal_p_value, wilcoxon_rank_sum, WilcoxonMethod, WilcoxonResult, EXACT_MAX_GROUP};

/// Which undirected edge set a structure is reduced to before scoring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvalMode {
    /// Moral graph: adjacencies plus marriages between co-parents.
    #[default]
    Moral,
    /// Plain adjacencies.
    CpdagSkeleton,
}

impl EvalMode {
    pub fn as_str(self) -> &'static str {
        match self {
            EvalMode::Moral => "moral",
            EvalMode::CpdagSkeleton => "cpdag-skeleton",
        }
    }
}

impl std::str::FromStr for EvalMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "moral" => Ok(EvalMode::Moral),
            "cpdag-skeleton" | "cpdag_skeleton" => Ok(EvalMode::CpdagSkeleton),
            _ => Err(invalid(format!("unknown eval mode `{s}`"))),
        }
    }
}

/// Counts over all unordered node pairs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
    pub tn: u64,
}

impl ConfusionCounts {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.fn_ + self.tn
    }

    /// `tp / (tp + fn)`, `None` for an empty reference.
    pub fn sensitivity(&self) -> Option<f64> {
        let d = self.tp + self.fn_;
        (d > 0).then(|| self.tp as f64 / d as f64)
    }

    /// `tn / (tn + fp)`, `None` when the reference is complete.
    pub fn specificity(&self) -> Option<f64> {
        let d = self.tn + self.fp;
        (d > 0).then(|| self.tn as f64 / d as f64)
    }
}

pub fn sensitivity(c: &ConfusionCounts) -> Option<f64> {
    c.sensitivity()
}

pub fn specificity(c: &ConfusionCounts) -> Option<f64> {
    c.specificity()
}

pub fn reference_graph(truth: &Dag, mode: EvalMode) -> UndirectedGraph {
    match mode {
        EvalMode::Moral => truth.moralize(),
        EvalMode::CpdagSkeleton => truth.skeleton(),
    }
}

/// Reduces `learned` per `mode` and counts agreements with `reference`.
pub fn compare_edges(reference: &UndirectedGraph, learned: &Pdag, mode: EvalMode) -> Result<ConfusionCounts> {
    if reference.n_nodes() != learned.n_nodes() {
        return Err(invalid(format!("node counts differ: reference {} vs learned {}", reference.n_nodes(), learned.n_nodes())));
    }
    let learned = match mode {
        EvalMode::Moral => learned.moralize(),
        EvalMode::CpdagSkeleton => learned.skeleton(),
    };
    Ok(compare_undirected(reference, &learned))
}

pub fn compare_undirected(reference: &UndirectedGraph, learned: &UndirectedGraph) -> ConfusionCounts {
    let n = reference.n_nodes();
    let mut c = ConfusionCounts::default();
    for a in 0..n {
        for b in a + 1..n {
            match (reference.has_edge(a, b), learned.has_edge(a, b)) {
                (true, true) => c.tp += 1,
                (false, true) => c.fp += 1,
                (true, false) => c.fn_ += 1,
                (false, false) => c.tn += 1,
            }
        }
    }
    c
}

/// Five-number summary with Tukey fences.
///
/// Quartiles use linear interpolation between order statistics: the
/// `q`-quantile of sorted `x[0..n]` is read at position `(n - 1) q`.
/// Whiskers reach the most extreme observations inside
/// `[Q1 - 1.5 IQR, Q3 + 1.5 IQR]`; anything beyond is an outlier.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxplotSummary {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub whisker_low: f64,
    pub whisker_high: f64,
    pub outliers: Vec<f64>,
}

pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn median(sample: &[f64]) -> Option<f64> {
    if sample.is_empty() {
        return None;
    }
    let mut s = sample.to_vec();
    s.sort_by(f64::total_cmp);
    Some(quantile_sorted(&s, 0.5))
}

pub fn boxplot_summary(sample: &[f64]) -> Option<BoxplotSummary> {
    if sample.is_empty() {
        return None;
    }
    let mut s = sample.to_vec();
    s.sort_by(f64::total_cmp);
    let q1 = quantile_sorted(&s, 0.25);
    let q3 = quantile_sorted(&s, 0.75);
    let iqr = q3 - q1;
    let (lo_fence, hi_fence) = (q1 - 1.5 * iqr, q3 + 1.5 * iqr);
    let inside = || s.iter().copied().filter(|&x| x >= lo_fence && x <= hi_fence);
    Some(BoxplotSummary {
        min: s[0],
        q1,
        median: quantile_sorted(&s, 0.5),
        q3,
        max: s[s.len() - 1],
        whisker_low: inside().next().unwrap_or(q1),
        whisker_high: inside().next_back().unwrap_or(q3),
        outliers: s.iter().copied().filter(|&x| x < lo_fence || x > hi_fence).collect(),
    })
}
