use super::subsets::any_subset;
use super::{orient_v_structures, LearnParams, OrientReport, SepsetTable};
use crate::ci::CiTest;
use crate::graph::{meek_closure, NodeId, Pdag, UndirectedGraph};

/// PC-stable: order-independent skeleton search followed by collider
/// orientation and Meek closure.
pub fn pc_stable(test: &dyn CiTest, params: &LearnParams) -> (Pdag, SepsetTable) {
    let (g, s, _) = pc_stable_report(test, params);
    (g, s)
}

pub(crate) fn pc_stable_report(test: &dyn CiTest, params: &LearnParams) -> (Pdag, SepsetTable, OrientReport) {
    let (skeleton, sepsets) = skeleton_search(test, params);
    let (g, report) = orient_v_structures(&skeleton, &sepsets);
    (meek_closure(&g), sepsets, report)
}

/// Level `l` tests every adjacent pair against all size-`l` subsets of the
/// adjacency sets frozen at the start of the level; removals are applied
/// once the level is done.
fn skeleton_search(test: &dyn CiTest, params: &LearnParams) -> (UndirectedGraph, SepsetTable) {
    let p = test.n_vars();
    let mut g = UndirectedGraph::new(p);
    for a in 0..p {
        for b in a + 1..p {
            g.add_edge(a, b);
        }
    }
    let mut sepsets = SepsetTable::new();
    let mut level = 0;
    while params.allows(level) {
        let snapshot: Vec<Vec<NodeId>> = (0..p).map(|v| g.neighbors(v).collect()).collect();
        if snapshot.iter().all(|adj| adj.len() <= level) {
            break;
        }
        let mut removed = Vec::new();
        let mut is_removed = vec![false; p * p];
        for x in 0..p {
            for &y in &snapshot[x] {
                if is_removed[x * p + y] {
                    continue;
                }
                let cands: Vec<NodeId> = snapshot[x].iter().copied().filter(|&v| v != y).collect();
                let mut found = None;
                any_subset(&cands, level, |z| {
                    if test.test(x, y, z).independent {
                        found = Some(z.to_vec());
                        true
                    } else {
                        false
                    }
                });
                if let Some(z) = found {
                    is_removed[x * p + y] = true;
                    is_removed[y * p + x] = true;
                    removed.push((x, y));
                    sepsets.insert(x, y, z);
                }
            }
        }
        for (x, y) in removed {
            g.remove_edge(x, y);
        }
        level += 1;
    }
    (g, sepsets)
}
