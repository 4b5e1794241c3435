//! Structural-equation sampling from a DAG.
//!
//! Root nodes are iid standard normal signals. Every other node is the
//! weighted sum of its parents, passed through the logistic sigmoid in the
//! nonlinear model, plus `sigma`-scaled standard normal noise.
//!
//! Draw order is fixed: nodes are visited in [`Dag::topological_order`] and
//! each node consumes `n_samples` consecutive standard normals (its signal
//! if it is a root, its noise otherwise) from a ChaCha8 stream, using the
//! ziggurat sampler of `rand_distr::StandardNormal`. The unit draws do not
//! depend on `sigma` or on the model, so datasets that differ only in those
//! share their randomness.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::{Dag, NodeId};
use crate::harness::fmt_f64;
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Linear,
    Nonlinear,
}

impl Model {
    pub fn as_str(self) -> &'static str {
        match self {
            Model::Linear => "linear",
            Model::Nonlinear => "nonlinear",
        }
    }
}

impl std::str::FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Model::Linear),
            "nonlinear" => Ok(Model::Nonlinear),
            _ => Err(invalid(format!("unknown model `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SemSpec {
    pub model: Model,
    pub sigma: f64,
    /// Coupling per edge; edges not listed use 1.0.
    pub weights: BTreeMap<(NodeId, NodeId), f64>,
}

impl SemSpec {
    pub fn new(model: Model, sigma: f64) -> Self {
        Self { model, sigma, weights: BTreeMap::new() }
    }

    pub fn weight(&self, from: NodeId, to: NodeId) -> f64 {
        self.weights.get(&(from, to)).copied().unwrap_or(1.0)
    }

    fn validate(&self, g: &Dag) -> Result<()> {
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return Err(invalid(format!("sigma must be finite and non-negative, got {}", self.sigma)));
        }
        if let Some(&(u, v)) = self.weights.keys().find(|&&(u, v)| !g.has_edge(u, v)) {
            return Err(invalid(format!("weight given for non-edge ({u}, {v})")));
        }
        if self.weights.values().any(|w| !w.is_finite()) {
            return Err(invalid("edge weights must be finite"));
        }
        Ok(())
    }
}

pub fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// Samples-by-variables matrix stored column by column.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    n_samples: usize,
    n_vars: usize,
    values: Vec<f64>,
}

impl DataMatrix {
    pub fn from_columns(columns: Vec<Vec<f64>>) -> Result<Self> {
        let n_vars = columns.len();
        let n_samples = columns.first().map_or(0, Vec::len);
        if n_samples == 0 {
            return Err(invalid("data matrix needs at least one sample"));
        }
        if columns.iter().any(|c| c.len() != n_samples) {
            return Err(invalid("columns differ in length"));
        }
        if columns.iter().flatten().any(|x| !x.is_finite()) {
            return Err(invalid("data matrix entries must be finite"));
        }
        Ok(Self { n_samples, n_vars, values: columns.concat() })
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.values[j * self.n_samples..(j + 1) * self.n_samples]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.n_samples)
    }

    /// Column `j` of the result is column `perm[j]` of `self`.
    pub fn select_columns(&self, perm: &[usize]) -> Result<Self> {
        if perm.iter().any(|&j| j >= self.n_vars) {
            return Err(invalid("column index out of range"));
        }
        Self::from_columns(perm.iter().map(|&j| self.column(j).to_vec()).collect())
    }

    /// CSV with header `x0,x1,...` and one row per sample.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record((0..self.n_vars).map(|j| format!("x{j}")))?;
        for i in 0..self.n_samples {
            w.write_record((0..self.n_vars).map(|j| fmt_f64(self.values[j * self.n_samples + i])))?;
        }
        w.flush().map_err(|e| Error::Csv(e.into()))?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let n_vars = r.headers()?.len();
        let mut columns = vec![Vec::new(); n_vars];
        for (line, rec) in r.records().enumerate() {
            let rec = rec?;
            for (j, field) in rec.iter().enumerate() {
                let x: f64 = field.trim().parse().map_err(|_| Error::Parse { line: line + 2, msg: format!("bad number `{field}`") })?;
                columns[j].push(x);
            }
        }
        Self::from_columns(columns)
    }
}

/// Samples `n_samples` rows from `g` under `spec`.
pub fn simulate_dataset<R: Rng + ?Sized>(g: &Dag, spec: &SemSpec, n_samples: usize, rng: &mut R) -> Result<DataMatrix> {
    if n_samples == 0 {
        return Err(invalid("n_samples must be positive"));
    }
    spec.validate(g)?;
    let n = g.n_nodes();
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); n];
    let mut z = vec![0.0; n_samples];
    for &v in g.topological_order() {
        let draws: Vec<f64> = (0..n_samples).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let parents = g.parents(v);
        if parents.is_empty() {
            columns[v] = draws;
            continue;
        }
        z.iter_mut().for_each(|s| *s = 0.0);
        for &p in parents {
            let w = spec.weight(p, v);
            for (s, &x) in z.iter_mut().zip(&columns[p]) {
                *s += w * x;
            }
        }
        columns[v] = match spec.model {
            Model::Linear => z.iter().zip(&draws).map(|(&s, &e)| s + spec.sigma * e).collect(),
            Model::Nonlinear => z.iter().zip(&draws).map(|(&s, &e)| sigmoid(s) + spec.sigma * e).collect(),
        };
    }
    DataMatrix::from_columns(columns)
}

/// [`simulate_dataset`] on a fresh stream keyed by `seed`.
pub fn simulate_seeded(g: &Dag, spec: &SemSpec, n_samples: usize, seed: u64) -> Result<DataMatrix> {
    simulate_dataset(g, spec, n_samples, &mut rng::stream(seed))
}
