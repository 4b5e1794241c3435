use super::SepsetTable;
use crate::graph::{NodeId, Pdag, UndirectedGraph};

/// What happened while orienting unshielded colliders.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OrientReport {
    pub v_structures: usize,
    /// Edge orientations refused because the edge was already oriented the
    /// other way, or because they would close a directed cycle.
    pub conflicts: usize,
    /// Unshielded triples whose end points have no recorded sepset.
    pub missing_sepsets: usize,
}

/// Orients `x -> w <- y` for every unshielded triple `x - w - y` whose
/// recorded separating set omits `w`.
///
/// Triples are visited by middle node, then by `(x, y)`, all ascending. The
/// first orientation an edge receives is kept; later contradicting demands
/// are counted as conflicts and dropped.
pub fn orient_v_structures(skeleton: &UndirectedGraph, sepsets: &SepsetTable) -> (Pdag, OrientReport) {
    let mut g = Pdag::from_skeleton(skeleton);
    let mut report = OrientReport::default();
    let n = skeleton.n_nodes();
    for w in 0..n {
        let nbrs: Vec<NodeId> = skeleton.neighbors(w).collect();
        for (i, &x) in nbrs.iter().enumerate() {
            for &y in &nbrs[i + 1..] {
                if skeleton.has_edge(x, y) {
                    continue;
                }
                let Some(sep) = sepsets.get(x, y) else {
                    log::debug!("no sepset for ({x}, {y}); triple {x} - {w} - {y} left alone");
                    report.missing_sepsets += 1;
                    continue;
                };
                if sep.contains(&w) {
                    continue;
                }
                report.v_structures += 1;
                for from in [x, y] {
                    if g.has_directed(from, w) {
                        continue;
                    }
                    if g.has_directed(w, from) || g.has_directed_path(w, from) {
                        log::debug!("orientation conflict on {from} -> {w}; keeping the earlier one");
                        report.conflicts += 1;
                        continue;
                    }
                    g.set_directed(from, w);
                }
            }
        }
    }
    (g, report)
}
