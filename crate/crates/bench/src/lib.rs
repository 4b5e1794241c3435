//! Fixtures shared by the benchmarks.

use bnbench_core::sem::{simulate_seeded, Model, SemSpec};
use bnbench_core::topology::TopologySpec;
use bnbench_core::{Dag, DataMatrix};

/// A preferential-attachment DAG and 1024 linear samples from it.
pub fn fixture(n_nodes: usize, gamma: f64, seed: u64) -> (Dag, DataMatrix) {
    let dag = TopologySpec { n_nodes, gamma, seed }.generate().expect("valid topology");
    let data = simulate_seeded(&dag, &SemSpec::new(Model::Linear, 3.0), 1024, seed).expect("valid model");
    (dag, data)
}
