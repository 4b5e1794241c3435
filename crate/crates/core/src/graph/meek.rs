//! Meek's orientation rules.

use super::{NodeId, Pdag};

/// Applies rules R1-R4 until no undirected edge can be oriented.
///
/// Candidate edges are scanned in lexicographic `(from, to)` order and an
/// orientation is committed as soon as a rule fires, so the result is
/// deterministic. An orientation that would close a directed cycle is
/// never made; on inconsistent input (possible with finite-sample
/// learners) such edges stay undirected.
pub fn meek_closure(g: &Pdag) -> Pdag {
    let mut g = g.clone();
    let n = g.n_nodes();
    loop {
        let mut changed = false;
        for a in 0..n {
            for b in 0..n {
                if !g.has_undirected(a, b) {
                    continue;
                }
                if (rule1(&g, a, b) || rule2(&g, a, b) || rule3(&g, a, b) || rule4(&g, a, b)) && !g.has_directed_path(b, a) {
                    g.set_directed(a, b);
                    changed = true;
                }
            }
        }
        if !changed {
            return g;
        }
    }
}

/// c -> a - b with c, b non-adjacent.
fn rule1(g: &Pdag, a: NodeId, b: NodeId) -> bool {
    g.parents(a).any(|c| c != b && !g.adjacent(c, b))
}

/// a -> c -> b with a - b.
fn rule2(g: &Pdag, a: NodeId, b: NodeId) -> bool {
    g.children(a).any(|c| g.has_directed(c, b))
}

/// a - c -> b and a - d -> b with c, d non-adjacent.
fn rule3(g: &Pdag, a: NodeId, b: NodeId) -> bool {
    let cands: Vec<NodeId> = g.undirected_neighbors(a).filter(|&c| c != b && g.has_directed(c, b)).collect();
    cands.iter().enumerate().any(|(i, &c)| cands[i + 1..].iter().any(|&d| !g.adjacent(c, d)))
}

/// a - c -> d -> b with a adjacent to d and c, b non-adjacent.
fn rule4(g: &Pdag, a: NodeId, b: NodeId) -> bool {
    g.undirected_neighbors(a)
        .filter(|&c| c != b && !g.adjacent(c, b))
        .any(|c| g.children(c).any(|d| d != a && g.has_directed(d, b) && g.adjacent(a, d)))
}
