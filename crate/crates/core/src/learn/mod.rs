//! Constraint-based structure learners.
//!
//! [`pc_stable`] searches for separating sets among the neighbours of each
//! pair with an order-independent level loop. [`grow_shrink_mb`] and
//! [`fast_iamb_mb`] estimate Markov blankets, which [`mb_based_learn`] turns
//! into a skeleton. All three finish with [`orient_v_structures`] and
//! [`meek_closure`].
//!
//! Learners take any [`CiTest`], so the same code runs on data and on the
//! d-separation oracle.

mod mb;
mod orient;
mod pc;
mod subsets;

use std::cell::{Cell, RefCell};
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::ci::{CiFlag, CiResult, CiTest, CiTestKind, GaussianCiTest};
use crate::error::{invalid, Error, Result};
use crate::graph::{NodeId, Pdag};
use crate::sem::DataMatrix;

pub use crate::graph::meek_closure;
pub use mb::{fast_iamb_mb, grow_shrink_mb, mb_based_learn};
pub use orient::{orient_v_structures, OrientReport};
pub use pc::pc_stable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    PcStable,
    GrowShrink,
    FastIamb,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::PcStable, Algorithm::GrowShrink, Algorithm::FastIamb];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::PcStable => "pc_stable",
            Algorithm::GrowShrink => "grow_shrink",
            Algorithm::FastIamb => "fast_iamb",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pc_stable" | "pc-stable" | "pc" => Ok(Algorithm::PcStable),
            "grow_shrink" | "grow-shrink" | "gs" => Ok(Algorithm::GrowShrink),
            "fast_iamb" | "fast-iamb" | "iamb" => Ok(Algorithm::FastIamb),
            _ => Err(invalid(format!("unknown algorithm `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LearnParams {
    pub algorithm: Algorithm,
    pub test: CiTestKind,
    /// Largest conditioning set tried by the exhaustive separating-set
    /// searches (PC levels and blanket neighbour identification). `None`
    /// leaves them bounded only by the degrees-of-freedom guard.
    pub max_condset: Option<usize>,
}

impl LearnParams {
    pub fn new(algorithm: Algorithm, test: CiTestKind) -> Self {
        Self { algorithm, test, max_condset: None }
    }

    pub(crate) fn allows(&self, size: usize) -> bool {
        self.max_condset.is_none_or(|m| size <= m)
    }
}

/// Separating sets, keyed by the unordered node pair.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SepsetTable {
    map: BTreeMap<(NodeId, NodeId), Vec<NodeId>>,
}

fn key(a: NodeId, b: NodeId) -> (NodeId, NodeId) {
    (a.min(b), a.max(b))
}

impl SepsetTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, a: NodeId, b: NodeId, mut set: Vec<NodeId>) {
        set.sort_unstable();
        self.map.insert(key(a, b), set);
    }

    pub fn get(&self, a: NodeId, b: NodeId) -> Option<&[NodeId]> {
        self.map.get(&key(a, b)).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(NodeId, NodeId), &Vec<NodeId>)> {
        self.map.iter()
    }
}

/// One issued test, for the optional trace log.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub x: NodeId,
    pub y: NodeId,
    pub z: Vec<NodeId>,
    pub statistic: f64,
    pub p_value: f64,
    pub independent: bool,
    pub flag: CiFlag,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TestCounts {
    pub total: u64,
    pub skipped: u64,
    pub singular: u64,
    pub max_cond_size: usize,
}

/// Wraps a [`CiTest`] and records every call.
pub struct Instrumented<'a> {
    inner: &'a dyn CiTest,
    counts: Cell<TestCounts>,
    trace: Option<RefCell<Vec<TraceRow>>>,
}

impl<'a> Instrumented<'a> {
    pub fn new(inner: &'a dyn CiTest) -> Self {
        Self { inner, counts: Cell::new(TestCounts::default()), trace: None }
    }

    pub fn with_trace(inner: &'a dyn CiTest) -> Self {
        Self { inner, counts: Cell::new(TestCounts::default()), trace: Some(RefCell::new(Vec::new())) }
    }

    pub fn counts(&self) -> TestCounts {
        self.counts.get()
    }

    pub fn take_trace(&self) -> Vec<TraceRow> {
        self.trace.as_ref().map(|t| t.take()).unwrap_or_default()
    }
}

impl CiTest for Instrumented<'_> {
    fn n_vars(&self) -> usize {
        self.inner.n_vars()
    }

    fn test(&self, x: usize, y: usize, z: &[usize]) -> CiResult {
        let r = self.inner.test(x, y, z);
        let mut c = self.counts.get();
        c.total += 1;
        c.max_cond_size = c.max_cond_size.max(z.len());
        match r.flag {
            CiFlag::Skipped => {
                c.skipped += 1;
                log::debug!("test ({x}, {y} | {z:?}) skipped by the dof guard; treated as independent");
            }
            CiFlag::Singular => c.singular += 1,
            CiFlag::Ok => {}
        }
        self.counts.set(c);
        if let Some(t) = &self.trace {
            t.borrow_mut().push(TraceRow {
                x,
                y,
                z: z.to_vec(),
                statistic: r.statistic,
                p_value: r.p_value,
                independent: r.independent,
                flag: r.flag,
            });
        }
        r
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LearnOutput {
    pub pdag: Pdag,
    pub sepsets: SepsetTable,
    pub orientation: OrientReport,
    pub tests: TestCounts,
    pub trace: Vec<TraceRow>,
}

/// Runs `params.algorithm` on `test`.
pub fn learn_with(test: &dyn CiTest, params: &LearnParams, trace: bool) -> LearnOutput {
    let inst = if trace { Instrumented::with_trace(test) } else { Instrumented::new(test) };
    let (pdag, sepsets, orientation) = match params.algorithm {
        Algorithm::PcStable => pc::pc_stable_report(&inst, params),
        Algorithm::GrowShrink | Algorithm::FastIamb => mb::mb_based_report(&inst, params),
    };
    LearnOutput { pdag, sepsets, orientation, tests: inst.counts(), trace: inst.take_trace() }
}

/// Learns a PDAG from data with the Gaussian test named in `params`.
pub fn learn(data: &DataMatrix, params: &LearnParams) -> LearnOutput {
    let test = GaussianCiTest::new(data, params.test);
    learn_with(&test, params, false)
}

/// Ordering for "most significant first": smaller p-value, then larger
/// statistic (p-values underflow to 0 for strong dependence), then lower
/// node index.
pub(crate) fn stronger(a: (NodeId, &CiResult), b: (NodeId, &CiResult)) -> std::cmp::Ordering {
    a.1.p_value.total_cmp(&b.1.p_value).then(b.1.statistic.abs().total_cmp(&a.1.statistic.abs())).then(a.0.cmp(&b.0))
}
