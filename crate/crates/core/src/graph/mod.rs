//! Graph types shared by every stage of the pipeline.
//!
//! Node identities are dense indices `0..n_nodes`. All iteration is in node
//! index order and all edge listings are lexicographic, so anything built on
//! top of these types is reproducible bit for bit.

mod cpdag;
mod dsep;
pub mod io;
mod meek;

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use crate::error::{invalid, Error, Result};

pub use cpdag::{cpdag_of_dag, v_structure_edges};
pub use dsep::d_separated;
pub use meek::meek_closure;

pub type NodeId = usize;

/// Returns a topological order of the digraph described by `edges`.
///
/// Among all valid orders the one that always emits the smallest available
/// node index is returned.
pub fn topological_order(n_nodes: usize, edges: &[(NodeId, NodeId)]) -> Result<Vec<NodeId>> {
    let mut indeg = vec![0usize; n_nodes];
    let mut children = vec![Vec::new(); n_nodes];
    for &(u, v) in edges {
        if u >= n_nodes || v >= n_nodes {
            return Err(invalid(format!("edge ({u}, {v}) out of range for {n_nodes} nodes")));
        }
        children[u].push(v);
        indeg[v] += 1;
    }
    let mut ready: BinaryHeap<Reverse<NodeId>> = (0..n_nodes).filter(|&v| indeg[v] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n_nodes);
    while let Some(Reverse(v)) = ready.pop() {
        order.push(v);
        for &c in &children[v] {
            indeg[c] -= 1;
            if indeg[c] == 0 {
                ready.push(Reverse(c));
            }
        }
    }
    if order.len() != n_nodes {
        return Err(Error::Cycle);
    }
    Ok(order)
}

/// A directed acyclic graph. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dag {
    n_nodes: usize,
    edges: BTreeSet<(NodeId, NodeId)>,
    parents: Vec<Vec<NodeId>>,
    children: Vec<Vec<NodeId>>,
    order: Vec<NodeId>,
}

impl Dag {
    pub fn new(n_nodes: usize, edges: impl IntoIterator<Item = (NodeId, NodeId)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n_nodes || v >= n_nodes {
                return Err(invalid(format!("edge ({u}, {v}) out of range for {n_nodes} nodes")));
            }
            if u == v {
                return Err(invalid(format!("self-loop on node {u}")));
            }
            if !set.insert((u, v)) {
                return Err(invalid(format!("duplicate edge ({u}, {v})")));
            }
        }
        let list: Vec<_> = set.iter().copied().collect();
        let order = topological_order(n_nodes, &list)?;
        let mut parents = vec![Vec::new(); n_nodes];
        let mut children = vec![Vec::new(); n_nodes];
        for &(u, v) in &list {
            parents[v].push(u);
            children[u].push(v);
        }
        Ok(Self { n_nodes, edges: set, parents, children, order })
    }

    /// A graph with `n_nodes` nodes and no edges.
    pub fn empty(n_nodes: usize) -> Self {
        Self::new(n_nodes, std::iter::empty()).expect("edgeless graph is acyclic")
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.edges.contains(&(u, v))
    }

    pub fn adjacent(&self, u: NodeId, v: NodeId) -> bool {
        self.has_edge(u, v) || self.has_edge(v, u)
    }

    /// Sorted parent list of `v`.
    pub fn parents(&self, v: NodeId) -> &[NodeId] {
        &self.parents[v]
    }

    pub fn children(&self, v: NodeId) -> &[NodeId] {
        &self.children[v]
    }

    pub fn in_degree(&self, v: NodeId) -> usize {
        self.parents[v].len()
    }

    pub fn roots(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.n_nodes).filter(|&v| self.parents[v].is_empty())
    }

    /// Parents precede children; ties are broken by smallest index.
    pub fn topological_order(&self) -> &[NodeId] {
        &self.order
    }

    /// Undirected graph with an edge for every directed edge plus an edge
    /// between every pair of co-parents.
    pub fn moralize(&self) -> UndirectedGraph {
        let mut g = self.skeleton();
        for v in 0..self.n_nodes {
            let ps = &self.parents[v];
            for (i, &a) in ps.iter().enumerate() {
                for &b in &ps[i + 1..] {
                    g.add_edge(a, b);
                }
            }
        }
        g
    }

    pub fn skeleton(&self) -> UndirectedGraph {
        let mut g = UndirectedGraph::new(self.n_nodes);
        for &(u, v) in &self.edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn in_degree_histogram(&self) -> DegreeHistogram {
        let mut counts = BTreeMap::new();
        for v in 0..self.n_nodes {
            *counts.entry(self.in_degree(v)).or_insert(0) += 1;
        }
        DegreeHistogram { counts }
    }

    /// Relabels node `v` as `perm[v]`.
    pub fn relabel(&self, perm: &[NodeId]) -> Result<Self> {
        check_permutation(perm, self.n_nodes)?;
        Dag::new(self.n_nodes, self.edges().map(|(u, v)| (perm[u], perm[v])))
    }

    pub fn to_pdag(&self) -> Pdag {
        let mut p = Pdag::new(self.n_nodes);
        for (u, v) in self.edges() {
            p.set_directed(u, v);
        }
        p
    }
}

pub fn moralize(g: &Dag) -> UndirectedGraph {
    g.moralize()
}

pub fn in_degree_histogram(g: &Dag) -> DegreeHistogram {
    g.in_degree_histogram()
}

fn check_permutation(perm: &[NodeId], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(invalid("permutation length does not match node count"));
    }
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(invalid("not a permutation"));
        }
    }
    Ok(())
}

/// Number of nodes with each in-degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeHistogram {
    pub counts: BTreeMap<usize, usize>,
}

impl DegreeHistogram {
    pub fn max_in_degree(&self) -> usize {
        self.counts.keys().next_back().copied().unwrap_or(0)
    }

    pub fn n_nodes(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn n_edges(&self) -> usize {
        self.counts.iter().map(|(k, c)| k * c).sum()
    }
}

/// Simple undirected graph over dense node indices, stored as a symmetric
/// adjacency matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    n_nodes: usize,
    adj: Vec<bool>,
}

impl UndirectedGraph {
    pub fn new(n_nodes: usize) -> Self {
        Self { n_nodes, adj: vec![false; n_nodes * n_nodes] }
    }

    pub fn from_edges(n_nodes: usize, edges: impl IntoIterator<Item = (NodeId, NodeId)>) -> Result<Self> {
        let mut g = Self::new(n_nodes);
        for (a, b) in edges {
            if a >= n_nodes || b >= n_nodes || a == b {
                return Err(invalid(format!("bad undirected edge ({a}, {b})")));
            }
            g.add_edge(a, b);
        }
        Ok(g)
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub(crate) fn add_edge(&mut self, a: NodeId, b: NodeId) {
        debug_assert_ne!(a, b);
        self.adj[a * self.n_nodes + b] = true;
        self.adj[b * self.n_nodes + a] = true;
    }

    pub(crate) fn remove_edge(&mut self, a: NodeId, b: NodeId) {
        self.adj[a * self.n_nodes + b] = false;
        self.adj[b * self.n_nodes + a] = false;
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        self.adj[a * self.n_nodes + b]
    }

    pub fn neighbors(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.n_nodes).filter(move |&u| self.has_edge(v, u))
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.neighbors(v).count()
    }

    /// Edges as `(a, b)` with `a < b`, lexicographic.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.n_nodes).flat_map(move |a| (a + 1..self.n_nodes).map(move |b| (a, b))).filter(move |&(a, b)| self.has_edge(a, b))
    }

    pub fn n_edges(&self) -> usize {
        self.adj.iter().filter(|&&e| e).count() / 2
    }

    pub fn is_subgraph_of(&self, other: &UndirectedGraph) -> bool {
        self.n_nodes == other.n_nodes && self.edges().all(|(a, b)| other.has_edge(a, b))
    }
}

/// Partially directed graph. Directed and undirected edges are kept apart;
/// a pair of nodes carries at most one relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pdag {
    n_nodes: usize,
    // dir[u * n + v]: u -> v
    dir: Vec<bool>,
    // symmetric
    und: Vec<bool>,
}

impl Pdag {
    pub fn new(n_nodes: usize) -> Self {
        Self { n_nodes, dir: vec![false; n_nodes * n_nodes], und: vec![false; n_nodes * n_nodes] }
    }

    pub fn from_edges(
        n_nodes: usize,
        directed: impl IntoIterator<Item = (NodeId, NodeId)>,
        undirected: impl IntoIterator<Item = (NodeId, NodeId)>,
    ) -> Result<Self> {
        let mut g = Self::new(n_nodes);
        for (u, v) in directed {
            g.check_new_pair(u, v)?;
            g.set_directed(u, v);
        }
        for (a, b) in undirected {
            g.check_new_pair(a, b)?;
            g.set_undirected(a, b);
        }
        Ok(g)
    }

    /// Undirected graph turned into a PDAG with every edge undirected.
    pub fn from_skeleton(skel: &UndirectedGraph) -> Self {
        let mut g = Self::new(skel.n_nodes());
        for (a, b) in skel.edges() {
            g.set_undirected(a, b);
        }
        g
    }

    fn check_new_pair(&self, a: NodeId, b: NodeId) -> Result<()> {
        if a >= self.n_nodes || b >= self.n_nodes {
            return Err(invalid(format!("edge ({a}, {b}) out of range for {} nodes", self.n_nodes)));
        }
        if a == b {
            return Err(invalid(format!("self-loop on node {a}")));
        }
        if self.adjacent(a, b) {
            return Err(invalid(format!("pair ({a}, {b}) already carries an edge")));
        }
        Ok(())
    }

    #[inline]
    fn idx(&self, a: NodeId, b: NodeId) -> usize {
        a * self.n_nodes + b
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    /// Makes `u -> v` the only relation between `u` and `v`.
    pub(crate) fn set_directed(&mut self, u: NodeId, v: NodeId) {
        let (uv, vu) = (self.idx(u, v), self.idx(v, u));
        self.und[uv] = false;
        self.und[vu] = false;
        self.dir[vu] = false;
        self.dir[uv] = true;
    }

    pub(crate) fn set_undirected(&mut self, a: NodeId, b: NodeId) {
        let (ab, ba) = (self.idx(a, b), self.idx(b, a));
        self.dir[ab] = false;
        self.dir[ba] = false;
        self.und[ab] = true;
        self.und[ba] = true;
    }

    pub fn has_directed(&self, u: NodeId, v: NodeId) -> bool {
        self.dir[self.idx(u, v)]
    }

    pub fn has_undirected(&self, a: NodeId, b: NodeId) -> bool {
        self.und[self.idx(a, b)]
    }

    pub fn adjacent(&self, a: NodeId, b: NodeId) -> bool {
        self.has_undirected(a, b) || self.has_directed(a, b) || self.has_directed(b, a)
    }

    /// Directed edges, lexicographic.
    pub fn directed_edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        let n = self.n_nodes;
        (0..n * n).filter(move |&i| self.dir[i]).map(move |i| (i / n, i % n))
    }

    /// Undirected edges as `(a, b)` with `a < b`, lexicographic.
    pub fn undirected_edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        let n = self.n_nodes;
        (0..n).flat_map(move |a| (a + 1..n).map(move |b| (a, b))).filter(move |&(a, b)| self.has_undirected(a, b))
    }

    pub fn n_directed(&self) -> usize {
        self.dir.iter().filter(|&&e| e).count()
    }

    pub fn n_undirected(&self) -> usize {
        self.und.iter().filter(|&&e| e).count() / 2
    }

    pub fn n_edges(&self) -> usize {
        self.n_directed() + self.n_undirected()
    }

    /// Nodes with a directed edge into `v`.
    pub fn parents(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.n_nodes).filter(move |&u| self.has_directed(u, v))
    }

    pub fn children(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.n_nodes).filter(move |&u| self.has_directed(v, u))
    }

    /// Nodes joined to `v` by an undirected edge.
    pub fn undirected_neighbors(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.n_nodes).filter(move |&u| self.has_undirected(v, u))
    }

    pub fn adjacents(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.n_nodes).filter(move |&u| u != v && self.adjacent(v, u))
    }

    pub fn skeleton(&self) -> UndirectedGraph {
        let mut g = UndirectedGraph::new(self.n_nodes);
        for a in 0..self.n_nodes {
            for b in a + 1..self.n_nodes {
                if self.adjacent(a, b) {
                    g.add_edge(a, b);
                }
            }
        }
        g
    }

    /// Moral graph of a PDAG: every adjacency is kept, and nodes that share
    /// a child through directed edges are married. Undirected edges only
    /// contribute adjacency.
    pub fn moralize(&self) -> UndirectedGraph {
        let mut g = self.skeleton();
        for v in 0..self.n_nodes {
            let ps: Vec<_> = self.parents(v).collect();
            for (i, &a) in ps.iter().enumerate() {
                for &b in &ps[i + 1..] {
                    g.add_edge(a, b);
                }
            }
        }
        g
    }

    /// True if `to` can be reached from `from` along directed edges.
    pub fn has_directed_path(&self, from: NodeId, to: NodeId) -> bool {
        let mut seen = vec![false; self.n_nodes];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(u) = stack.pop() {
            if u == to {
                return true;
            }
            for w in self.children(u) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        false
    }

    pub fn has_directed_cycle(&self) -> bool {
        let edges: Vec<_> = self.directed_edges().collect();
        matches!(topological_order(self.n_nodes, &edges), Err(Error::Cycle))
    }

    /// Relabels node `v` as `perm[v]`.
    pub fn relabel(&self, perm: &[NodeId]) -> Result<Self> {
        check_permutation(perm, self.n_nodes)?;
        Pdag::from_edges(
            self.n_nodes,
            self.directed_edges().map(|(u, v)| (perm[u], perm[v])),
            self.undirected_edges().map(|(a, b)| (perm[a], perm[b])),
        )
    }
}
