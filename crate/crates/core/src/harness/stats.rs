use std::io::Write;

use crate::error::{Error, Result};
use crate::eval::{wilcoxon_rank_sum, WilcoxonResult};
use crate::learn::Algorithm;
use crate::sem::Model;

use super::{fmt_f64, RunRecord};

pub const PVALUES_CSV_HEADER: &str = "model,n_nodes,sigma,algorithm,topology_a,topology_b,n_a,n_b,statistic,p_value,method,significant";

/// Rank-sum comparison of two topologies within one
/// `(model, n_nodes, sigma, algorithm)` group. `result` is `None` when a
/// side has no usable sensitivity value.
#[derive(Debug, Clone, PartialEq)]
pub struct PValueRow {
    pub model: Model,
    pub n_nodes: usize,
    pub sigma: f64,
    pub algorithm: Algorithm,
    pub topology_a: String,
    pub topology_b: String,
    pub n_a: usize,
    pub n_b: usize,
    pub result: Option<WilcoxonResult>,
    pub significant: Option<bool>,
}

/// Compares the sensitivity of topology `pair.0` against `pair.1` in every
/// group, in order of first appearance in `records`. Failed runs and
/// missing sensitivities are left out; no other column is read.
pub fn compare_topologies(records: &[RunRecord], pair: (&str, &str), alpha: f64) -> Result<Vec<PValueRow>> {
    for label in [pair.0, pair.1] {
        if !records.iter().any(|r| r.topology == label) {
            return Err(Error::InvalidArgument(format!("topology `{label}` not present in the records")));
        }
    }
    type Key = (Model, usize, u64, Algorithm);
    let key = |r: &RunRecord| -> Key { (r.model, r.n_nodes, r.sigma.to_bits(), r.algorithm) };
    let mut groups: Vec<(Key, Vec<f64>, Vec<f64>)> = Vec::new();
    for r in records.iter().filter(|r| r.topology == pair.0 || r.topology == pair.1) {
        let k = key(r);
        let idx = match groups.iter().position(|g| g.0 == k) {
            Some(i) => i,
            None => {
                groups.push((k, Vec::new(), Vec::new()));
                groups.len() - 1
            }
        };
        let Some(s) = r.sensitivity.filter(|_| r.is_ok()) else { continue };
        if r.topology == pair.0 {
            groups[idx].1.push(s);
        } else {
            groups[idx].2.push(s);
        }
    }
    Ok(groups
        .into_iter()
        .map(|((model, n_nodes, sigma, algorithm), a, b)| {
            let result = wilcoxon_rank_sum(&a, &b);
            PValueRow {
                model,
                n_nodes,
                sigma: f64::from_bits(sigma),
                algorithm,
                topology_a: pair.0.into(),
                topology_b: pair.1.into(),
                n_a: a.len(),
                n_b: b.len(),
                significant: result.as_ref().map(|r| r.p_value < alpha),
                result,
            }
        })
        .collect())
}

pub fn write_pvalues_csv<W: Write>(rows: &[PValueRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(PVALUES_CSV_HEADER.split(','))?;
    for r in rows {
        let (stat, p, method) = match &r.result {
            Some(x) => (fmt_f64(x.rank_sum_statistic), fmt_f64(x.p_value), x.method.as_str().to_string()),
            None => Default::default(),
        };
        w.write_record([
            r.model.as_str().to_string(),
            r.n_nodes.to_string(),
            fmt_f64(r.sigma),
            r.algorithm.as_str().into(),
            r.topology_a.clone(),
            r.topology_b.clone(),
            r.n_a.to_string(),
            r.n_b.to_string(),
            stat,
            p,
            method,
            r.significant.map(|s| s.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
