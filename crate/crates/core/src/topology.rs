//! Preferential-attachment tree generator.
//!
//! Nodes arrive one at a time. Each newcomer links to one existing node
//! chosen with probability proportional to `k^gamma`, where `k` is the
//! existing node's current total degree, and the edge points from the
//! newcomer to its target. The result is an in-tree rooted at node 0 with
//! `n - 1` edges: `gamma < 1` gives a sub-linear (few, small hubs) topology,
//! `gamma = 1` the classical scale-free one, and `gamma > 1` hub-and-spoke
//! graphs.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::graph::Dag;
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TopologySpec {
    pub n_nodes: usize,
    pub gamma: f64,
    pub seed: u64,
}

impl TopologySpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_nodes < 2 {
            return Err(invalid(format!("n_nodes must be at least 2, got {}", self.n_nodes)));
        }
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(invalid(format!("gamma must be finite and non-negative, got {}", self.gamma)));
        }
        Ok(())
    }

    pub fn generate(&self) -> Result<Dag> {
        self.validate()?;
        generate_pa_dag(self.n_nodes, self.gamma, &mut rng::stream(self.seed))
    }
}

/// `(k / k_max)^gamma`, which stays in `(0, 1]` where `k^gamma` would
/// overflow for large `gamma`.
fn scaled_kernel(k: u64, k_max: f64, gamma: f64) -> f64 {
    (k as f64 / k_max).powf(gamma)
}

/// Normalized attachment probabilities `k_i^gamma / sum_j k_j^gamma`.
pub fn attachment_weights(degrees: &[u64], gamma: f64) -> Result<Vec<f64>> {
    if degrees.is_empty() {
        return Err(invalid("degree sequence is empty"));
    }
    if degrees.contains(&0) {
        return Err(invalid("attachment candidates must have degree >= 1"));
    }
    let k_max = *degrees.iter().max().expect("non-empty") as f64;
    let w: Vec<f64> = degrees.iter().map(|&k| scaled_kernel(k, k_max, gamma)).collect();
    let total: f64 = w.iter().sum();
    Ok(w.into_iter().map(|x| x / total).collect())
}

/// Grows a preferential-attachment tree on `n_nodes` nodes.
pub fn generate_pa_dag<R: Rng + ?Sized>(n_nodes: usize, gamma: f64, rng: &mut R) -> Result<Dag> {
    TopologySpec { n_nodes, gamma, seed: 0 }.validate()?;
    let mut degree = vec![0u64; n_nodes];
    let mut edges = Vec::with_capacity(n_nodes - 1);
    edges.push((1, 0));
    degree[0] = 1;
    degree[1] = 1;
    let mut cum = Vec::with_capacity(n_nodes);
    for t in 2..n_nodes {
        cum.clear();
        let k_max = *degree[..t].iter().max().expect("t >= 2") as f64;
        let mut acc = 0.0;
        for &k in &degree[..t] {
            acc += scaled_kernel(k, k_max, gamma);
            cum.push(acc);
        }
        let u = rng.random::<f64>() * acc;
        // first index whose cumulative weight exceeds u
        let target = cum.partition_point(|&c| c <= u).min(t - 1);
        edges.push((t, target));
        degree[t] += 1;
        degree[target] += 1;
    }
    Dag::new(n_nodes, edges)
}
