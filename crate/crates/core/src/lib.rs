//! Constraint-based Bayesian network structure learning together with a
//! benchmark harness that measures how edge recovery depends on the
//! topology of the generating network.
//!
//! The pipeline is: [`topology`] grows a preferential-attachment tree,
//! [`sem`] samples linear or sigmoid structural-equation data from it,
//! [`learn`] recovers a PDAG with PC-stable, Grow-Shrink or fast-IAMB on top
//! of the [`ci`] tests, and [`eval`] scores the result against the truth.
//! [`harness`] runs the whole thing over a seeded experiment grid.

pub mod ci;
pub mod error;
pub mod eval;
pub mod graph;
pub mod harness;
pub mod learn;
pub mod rng;
pub mod sem;
pub mod topology;

pub use error::{Error, Result};
pub use graph::{Dag, DegreeHistogram, NodeId, Pdag, UndirectedGraph};
pub use sem::DataMatrix;
