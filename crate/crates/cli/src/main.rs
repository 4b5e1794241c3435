use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use bnbench_core::ci::{CiTestKind, GaussianCiTest, TestKind};
use bnbench_core::eval::EvalMode;
use bnbench_core::graph::io::{parse, to_dot, write_dag, write_pdag, GraphFile};
use bnbench_core::harness::{
    compare_topologies, emit_csv, emit_plots, read_csv, run_grid, write_pvalues_csv, write_trace_csv, ExperimentConfig, PValueRow,
    RunOptions, RunRecord,
};
use bnbench_core::learn::{learn_with, Algorithm, LearnParams};
use bnbench_core::sem::{simulate_seeded, Model, SemSpec};
use bnbench_core::topology::TopologySpec;
use bnbench_core::DataMatrix;
use clap::{Parser, Subcommand, ValueEnum};

/// Structure-learning benchmark over preferential-attachment topologies.
#[derive(Parser)]
#[command(name = "bnbench", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Edges,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Grow a preferential-attachment DAG.
    Generate {
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = GraphFormat::Edges)]
        format: GraphFormat,
        /// Output file; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample a data set from a DAG file.
    Simulate {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value = "linear")]
        model: Model,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, default_value_t = 1024)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Learn a PDAG from a data CSV.
    Learn {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value = "pc_stable")]
        algorithm: Algorithm,
        #[arg(long, value_enum, default_value = "fisher-z")]
        test: TestArg,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long)]
        max_condset: Option<usize>,
        #[arg(long, value_enum, default_value_t = GraphFormat::Edges)]
        format: GraphFormat,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write every CI test issued to this CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Run the full experiment grid.
    Bench {
        #[command(flatten)]
        grid: GridArgs,
        /// Output directory for runs.csv, pvalues.csv and plots/.
        #[arg(long, default_value = "results")]
        out: PathBuf,
        /// Write per-run CI test logs under <out>/traces.
        #[arg(long)]
        trace: bool,
    },
    /// Compare two topologies on an existing runs.csv.
    Stats {
        #[arg(long)]
        runs: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        /// Output CSV; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render SVG panels from an existing runs.csv.
    Plot {
        #[arg(long)]
        runs: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value = "plots")]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TestArg {
    FisherZ,
    MiGaussian,
}

impl From<TestArg> for TestKind {
    fn from(t: TestArg) -> Self {
        match t {
            TestArg::FisherZ => TestKind::FisherZ,
            TestArg::MiGaussian => TestKind::MiGaussian,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EvalArg {
    Moral,
    CpdagSkeleton,
}

/// Config file plus the flags that override it.
#[derive(clap::Args)]
struct GridArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, value_enum)]
    eval_mode: Option<EvalArg>,
}

impl GridArgs {
    fn resolve(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        if let Some(s) = self.seed {
            cfg.master_seed = s;
        }
        if let Some(w) = self.workers {
            cfg.workers = w;
        }
        if let Some(m) = self.eval_mode {
            cfg.eval_mode = match m {
                EvalArg::Moral => EvalMode::Moral,
                EvalArg::CpdagSkeleton => EvalMode::CpdagSkeleton,
            };
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => io::stdout().write_all(text.as_bytes()).context("writing stdout"),
    }
}

fn read_graph(path: &Path) -> Result<GraphFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn comparison(cfg: &ExperimentConfig, records: &[RunRecord]) -> Result<Vec<PValueRow>> {
    let [a, b] = &cfg.compare;
    Ok(compare_topologies(records, (a, b), cfg.alpha)?)
}

/// Returns whether the grid had failed runs.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Generate { nodes, gamma, seed, format, out } => {
            let dag = TopologySpec { n_nodes: nodes, gamma, seed }.generate()?;
            let text = match format {
                GraphFormat::Edges => write_dag(&dag),
                GraphFormat::Dot => to_dot(&dag.to_pdag()),
            };
            emit(out.as_deref(), &text)?;
        }
        Command::Simulate { graph, model, sigma, samples, seed, out } => {
            let dag = match read_graph(&graph)? {
                GraphFile::Dag(d) => d,
                GraphFile::Pdag(_) => bail!("{} is a PDAG; simulation needs a DAG", graph.display()),
            };
            let data = simulate_seeded(&dag, &SemSpec::new(model, sigma), samples, seed)?;
            let mut buf = Vec::new();
            data.write_csv(&mut buf)?;
            emit(out.as_deref(), std::str::from_utf8(&buf)?)?;
        }
        Command::Learn { data, algorithm, test, alpha, max_condset, format, out, trace } => {
            let f = fs::File::open(&data).with_context(|| format!("reading {}", data.display()))?;
            let data = DataMatrix::read_csv(io::BufReader::new(f))?;
            let kind = CiTestKind::new(test.into(), alpha)?;
            let mut params = LearnParams::new(algorithm, kind);
            params.max_condset = max_condset;
            let learned = learn_with(&GaussianCiTest::new(&data, kind), &params, trace.is_some());
            if let Some(path) = trace {
                let f = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                write_trace_csv(&learned.trace, io::BufWriter::new(f)).with_context(|| format!("writing {}", path.display()))?;
            }
            log::info!(
                "{} tests ({} skipped by the dof guard), {} v-structure conflicts",
                learned.tests.total,
                learned.tests.skipped,
                learned.orientation.conflicts
            );
            let text = match format {
                GraphFormat::Edges => write_pdag(&learned.pdag),
                GraphFormat::Dot => to_dot(&learned.pdag),
            };
            emit(out.as_deref(), &text)?;
        }
        Command::Bench { grid, out, trace } => {
            let cfg = grid.resolve()?;
            fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            let opts = RunOptions { trace_dir: trace.then(|| out.join("traces")) };
            log::info!("running {} runs on {} workers", cfg.n_runs(), cfg.workers);
            let records = run_grid(&cfg, &opts)?;
            emit_csv(&records, &out.join("runs.csv"))?;
            let rows = comparison(&cfg, &records)?;
            let f = fs::File::create(out.join("pvalues.csv")).context("creating pvalues.csv")?;
            write_pvalues_csv(&rows, io::BufWriter::new(f))?;
            emit_plots(&records, &rows, cfg.alpha, &out.join("plots"))?;
            fs::write(out.join("config.toml"), cfg.to_toml()).context("writing config.toml")?;
            let failed = records.iter().filter(|r| !r.is_ok()).count();
            if failed > 0 {
                eprintln!("{failed} of {} runs failed; see the status column of runs.csv", records.len());
            }
            return Ok(failed > 0);
        }
        Command::Stats { runs, grid, out } => {
            let cfg = grid.resolve()?;
            let rows = comparison(&cfg, &read_csv(&runs)?)?;
            let mut buf = Vec::new();
            write_pvalues_csv(&rows, &mut buf)?;
            emit(out.as_deref(), std::str::from_utf8(&buf)?)?;
        }
        Command::Plot { runs, grid, out } => {
            let cfg = grid.resolve()?;
            let records = read_csv(&runs)?;
            let rows = comparison(&cfg, &records)?;
            for p in emit_plots(&records, &rows, cfg.alpha, &out)? {
                println!("{}", p.display());
            }
        }
    }
    Ok(false)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
