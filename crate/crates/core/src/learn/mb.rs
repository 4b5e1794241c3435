use std::collections::BTreeSet;

use super::subsets::any_subset;
use super::{orient_v_structures, stronger, Algorithm, LearnParams, OrientReport, SepsetTable};
use crate::ci::{CiResult, CiTest};
use crate::graph::{meek_closure, NodeId, Pdag, UndirectedGraph};

/// Dependent candidates outside `mb`, most significant first.
fn ranked_candidates(test: &dyn CiTest, target: NodeId, mb: &[NodeId]) -> Vec<(NodeId, CiResult)> {
    let mut out: Vec<(NodeId, CiResult)> = (0..test.n_vars())
        .filter(|&v| v != target && !mb.contains(&v))
        .filter_map(|v| {
            let r = test.test(target, v, mb);
            (!r.independent).then_some((v, r))
        })
        .collect();
    out.sort_by(|a, b| stronger((a.0, &a.1), (b.0, &b.1)));
    out
}

/// Drops members that are independent of `target` given the rest, visiting
/// members in ascending order and removing them immediately. Returns
/// whether anything was removed.
fn shrink(test: &dyn CiTest, target: NodeId, mb: &mut Vec<NodeId>) -> bool {
    let mut removed = false;
    for v in mb.clone() {
        let rest: Vec<NodeId> = mb.iter().copied().filter(|&u| u != v).collect();
        if test.test(target, v, &rest).independent {
            mb.retain(|&u| u != v);
            removed = true;
        }
    }
    removed
}

fn insert_sorted(mb: &mut Vec<NodeId>, v: NodeId) {
    let pos = mb.partition_point(|&u| u < v);
    mb.insert(pos, v);
}

/// Grow-Shrink Markov blanket of `target`.
///
/// Grow: add the single most significant dependent variable given the
/// current blanket, and repeat until none is left. Shrink: remove members
/// that are independent given the others.
pub fn grow_shrink_mb(test: &dyn CiTest, target: NodeId, _params: &LearnParams) -> Vec<NodeId> {
    let mut mb = Vec::new();
    while let Some(&(best, _)) = ranked_candidates(test, target, &mb).first() {
        insert_sorted(&mut mb, best);
    }
    shrink(test, target, &mut mb);
    mb
}

/// Fast-IAMB Markov blanket of `target`.
///
/// Each pass ranks all dependent non-members once and admits them in rank
/// order, re-testing each one after the first against the grown blanket and
/// ending the pass at the first that has become independent. A shrink step
/// follows every pass. Stops when a pass admits nothing, or when a blanket
/// repeats (finite-sample tests can cycle).
pub fn fast_iamb_mb(test: &dyn CiTest, target: NodeId, _params: &LearnParams) -> Vec<NodeId> {
    let mut mb: Vec<NodeId> = Vec::new();
    let mut seen = BTreeSet::new();
    seen.insert(mb.clone());
    loop {
        let ranked = ranked_candidates(test, target, &mb);
        if ranked.is_empty() {
            break;
        }
        for (i, &(v, _)) in ranked.iter().enumerate() {
            if i > 0 && test.test(target, v, &mb).independent {
                break;
            }
            insert_sorted(&mut mb, v);
        }
        shrink(test, target, &mut mb);
        if !seen.insert(mb.clone()) {
            log::debug!("fast-IAMB blanket of {target} revisited a previous state; stopping");
            break;
        }
    }
    mb
}

/// Skeleton and orientation from per-node Markov blankets (GS and
/// fast-IAMB).
pub fn mb_based_learn(test: &dyn CiTest, params: &LearnParams) -> (Pdag, SepsetTable) {
    let (g, s, _) = mb_based_report(test, params);
    (g, s)
}

pub(crate) fn mb_based_report(test: &dyn CiTest, params: &LearnParams) -> (Pdag, SepsetTable, OrientReport) {
    let p = test.n_vars();
    let blanket = match params.algorithm {
        Algorithm::FastIamb => fast_iamb_mb,
        _ => grow_shrink_mb,
    };
    let raw: Vec<Vec<NodeId>> = (0..p).map(|t| blanket(test, t, params)).collect();
    // AND rule
    let mbs: Vec<Vec<NodeId>> = (0..p).map(|x| raw[x].iter().copied().filter(|&y| raw[y].contains(&x)).collect()).collect();

    let mut skeleton = UndirectedGraph::new(p);
    let mut sepsets = SepsetTable::new();
    for x in 0..p {
        for &y in mbs[x].iter().filter(|&&y| y > x) {
            let bx: Vec<NodeId> = mbs[x].iter().copied().filter(|&v| v != y).collect();
            let by: Vec<NodeId> = mbs[y].iter().copied().filter(|&v| v != x).collect();
            let base = if bx.len() <= by.len() { bx } else { by };
            let mut found = None;
            for size in (0..=base.len()).take_while(|&s| params.allows(s)) {
                if any_subset(&base, size, |z| {
                    let sep = test.test(x, y, z).independent;
                    if sep {
                        found = Some(z.to_vec());
                    }
                    sep
                }) {
                    break;
                }
            }
            match found {
                Some(z) => sepsets.insert(x, y, z),
                None => skeleton.add_edge(x, y),
            }
        }
    }
    let (g, report) = orient_v_structures(&skeleton, &sepsets);
    (meek_closure(&g), sepsets, report)
}
