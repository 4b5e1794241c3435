use super::{meek_closure, Dag, NodeId, Pdag};

/// Directed edges of `g` that take part in a v-structure `u -> w <- v`
/// with `u` and `v` non-adjacent.
pub fn v_structure_edges(g: &Dag) -> Vec<(NodeId, NodeId)> {
    let mut out = Vec::new();
    for (u, w) in g.edges() {
        if g.parents(w).iter().any(|&v| v != u && !g.adjacent(u, v)) {
            out.push((u, w));
        }
    }
    out
}

/// Canonical representative of the Markov equivalence class of `g`:
/// skeleton plus v-structures, closed under the Meek rules.
pub fn cpdag_of_dag(g: &Dag) -> Pdag {
    let mut p = Pdag::from_skeleton(&g.skeleton());
    for (u, w) in v_structure_edges(g) {
        p.set_directed(u, w);
    }
    meek_closure(&p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_is_fully_undirected() {
        let c = cpdag_of_dag(&Dag::new(3, [(0, 1), (1, 2)]).unwrap());
        assert_eq!(c.undirected_edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert_eq!(c.n_directed(), 0);
    }

    #[test]
    fn collider_is_compelled() {
        let c = cpdag_of_dag(&Dag::new(3, [(0, 2), (1, 2)]).unwrap());
        assert_eq!(c.directed_edges().collect::<Vec<_>>(), vec![(0, 2), (1, 2)]);
        assert_eq!(c.n_undirected(), 0);
    }

    #[test]
    fn single_edge_is_undirected() {
        let c = cpdag_of_dag(&Dag::new(2, [(0, 1)]).unwrap());
        assert_eq!(c.undirected_edges().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn collider_propagates_downstream() {
        // 0 -> 2 <- 1, 2 -> 3: the 2 -> 3 edge is compelled by R1
        let c = cpdag_of_dag(&Dag::new(4, [(0, 2), (1, 2), (2, 3)]).unwrap());
        assert!(c.has_directed(2, 3));
        assert_eq!(c.n_undirected(), 0);
    }
}
