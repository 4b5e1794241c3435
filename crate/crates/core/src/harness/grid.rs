use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;

use crate::ci::{CiTestKind, GaussianCiTest};
use crate::error::{io_err, Error, Result};
use crate::eval::{compare_edges, reference_graph};
use crate::learn::{learn_with, Algorithm, LearnParams, TraceRow};
use crate::sem::{simulate_seeded, Model, SemSpec};
use crate::topology::TopologySpec;

use super::{derive_run_seed, fmt_f64, ExperimentConfig, RunRecord, TopologyLevel};

/// One `(cell, rep)` of the grid with its derived seeds.
///
/// The DAG stream depends on the topology, node count and (when DAGs are
/// regenerated) the replicate; the data stream additionally on the sample
/// size. Neither depends on the model, noise level or algorithm, so runs
/// that differ only in those share the graph and the standard-normal draws
/// and are compared on matched inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunPlan {
    pub topology: TopologyLevel,
    pub model: Model,
    pub n_nodes: usize,
    pub sigma: f64,
    pub algorithm: Algorithm,
    pub rep: usize,
    /// Identifies the run; distinct for every cell and replicate.
    pub run_seed: u64,
    pub dag_seed: u64,
    pub data_seed: u64,
}

impl RunPlan {
    /// All runs of `cfg` in output order: topology, model, node count,
    /// noise level, algorithm, replicate, each in config order.
    pub fn enumerate(cfg: &ExperimentConfig) -> Vec<RunPlan> {
        let mut out = Vec::with_capacity(cfg.n_runs());
        for topo in &cfg.topologies {
            for &model in &cfg.models {
                for &n_nodes in &cfg.node_counts {
                    for &sigma in &cfg.sigmas {
                        for &algorithm in &cfg.algorithms {
                            for rep in 0..cfg.n_reps {
                                out.push(Self::new(cfg, topo, model, n_nodes, sigma, algorithm, rep));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    fn new(
        cfg: &ExperimentConfig,
        topo: &TopologyLevel,
        model: Model,
        n_nodes: usize,
        sigma: f64,
        algorithm: Algorithm,
        rep: usize,
    ) -> Self {
        let graph_key = format!("{}|{}|{n_nodes}", topo.label, fmt_f64(topo.gamma));
        let dag_rep = if cfg.regenerate_dag_per_rep { rep as u64 } else { 0 };
        let run_key = format!("run|{graph_key}|{}|{}|{}|{}", model.as_str(), fmt_f64(sigma), algorithm.as_str(), cfg.sample_size);
        Self {
            topology: topo.clone(),
            model,
            n_nodes,
            sigma,
            algorithm,
            rep,
            run_seed: derive_run_seed(cfg.master_seed, &run_key, rep as u64),
            dag_seed: derive_run_seed(cfg.master_seed, &format!("dag|{graph_key}"), dag_rep),
            data_seed: derive_run_seed(cfg.master_seed, &format!("data|{graph_key}|{}", cfg.sample_size), rep as u64),
        }
    }

    fn file_stem(&self) -> String {
        format!(
            "{}_{}_{}_{}_{}_{}",
            self.topology.label,
            self.model.as_str(),
            self.n_nodes,
            fmt_f64(self.sigma),
            self.algorithm.as_str(),
            self.rep
        )
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Directory for per-run CI test logs; `None` disables tracing.
    pub trace_dir: Option<PathBuf>,
}

struct Measured {
    record: RunRecord,
    trace: Vec<TraceRow>,
}

fn run_inner(cfg: &ExperimentConfig, plan: &RunPlan, trace: bool) -> Result<Measured> {
    let start = Instant::now();
    let dag = TopologySpec { n_nodes: plan.n_nodes, gamma: plan.topology.gamma, seed: plan.dag_seed }.generate()?;
    let data = simulate_seeded(&dag, &SemSpec::new(plan.model, plan.sigma), cfg.sample_size, plan.data_seed)?;
    let kind = CiTestKind::new(cfg.tests.for_model(plan.model), cfg.alpha)?;
    let mut params = LearnParams::new(plan.algorithm, kind);
    params.max_condset = cfg.max_condset;
    let test = GaussianCiTest::new(&data, kind);
    let out = learn_with(&test, &params, trace);
    let counts = compare_edges(&reference_graph(&dag, cfg.eval_mode), &out.pdag, cfg.eval_mode)?;
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let mut record = blank_record(cfg, plan);
    record.sensitivity = counts.sensitivity();
    record.specificity = counts.specificity();
    record.counts = Some(counts);
    record.max_in_degree = Some(dag.in_degree_histogram().max_in_degree());
    record.n_ci_tests = Some(out.tests.total);
    record.runtime_ms = cfg.record_runtime.then_some(elapsed);
    record.status = "ok".into();
    Ok(Measured { record, trace: out.trace })
}

fn blank_record(cfg: &ExperimentConfig, plan: &RunPlan) -> RunRecord {
    RunRecord {
        topology: plan.topology.label.clone(),
        gamma: plan.topology.gamma,
        model: plan.model,
        n_nodes: plan.n_nodes,
        sigma: plan.sigma,
        sample_size: cfg.sample_size,
        algorithm: plan.algorithm,
        rep: plan.rep,
        run_seed: plan.run_seed,
        sensitivity: None,
        specificity: None,
        counts: None,
        max_in_degree: None,
        n_ci_tests: None,
        runtime_ms: None,
        status: String::new(),
    }
}

/// Writes trace rows as CSV, with the conditioning set space-separated.
pub fn write_trace_csv<W: Write>(rows: &[TraceRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "x,y,z,statistic,p_value,independent,flag")?;
    for r in rows {
        let z: Vec<String> = r.z.iter().map(|v| v.to_string()).collect();
        writeln!(out, "{},{},{},{},{},{},{:?}", r.x, r.y, z.join(" "), fmt_f64(r.statistic), fmt_f64(r.p_value), r.independent, r.flag)?;
    }
    out.flush()
}

fn write_trace(path: &std::path::Path, rows: &[TraceRow]) -> Result<()> {
    let f = std::fs::File::create(path).map_err(io_err(path))?;
    write_trace_csv(rows, std::io::BufWriter::new(f)).map_err(io_err(path))
}

/// Executes one run. Never fails: errors and panics become a record whose
/// status starts with `failed:`.
pub fn execute_run(cfg: &ExperimentConfig, plan: &RunPlan, opts: &RunOptions) -> RunRecord {
    let trace = opts.trace_dir.is_some();
    let result = catch_unwind(AssertUnwindSafe(|| run_inner(cfg, plan, trace)));
    let outcome = match result {
        Ok(Ok(m)) => match &opts.trace_dir {
            Some(dir) => write_trace(&dir.join(format!("trace_{}.csv", plan.file_stem())), &m.trace).map(|_| m.record),
            None => Ok(m.record),
        },
        Ok(Err(e)) => Err(e),
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            Err(Error::InvalidArgument(format!("panicked: {msg}")))
        }
    };
    outcome.unwrap_or_else(|e| {
        log::warn!("run {} failed: {e}", plan.file_stem());
        let mut r = blank_record(cfg, plan);
        r.status = format!("failed: {e}");
        r
    })
}

/// Runs every cell and replicate of `cfg` on `cfg.workers` threads.
///
/// Each run writes only its own slot, so the returned records are in
/// [`RunPlan::enumerate`] order whatever the thread count.
pub fn run_grid(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<Vec<RunRecord>> {
    cfg.validate()?;
    if let Some(dir) = &opts.trace_dir {
        std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    let plans = RunPlan::enumerate(cfg);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start {} workers: {e}", cfg.workers)))?;
    Ok(pool.install(|| plans.par_iter().map(|p| execute_run(cfg, p, opts)).collect()))
}
