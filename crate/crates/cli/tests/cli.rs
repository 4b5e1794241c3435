use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use bnbench_core::harness::{read_csv, ExperimentConfig, PVALUES_CSV_HEADER, RUNS_CSV_HEADER};

fn bnbench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bnbench")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = bnbench(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

const SMALL: &str = r#"
n_reps = 3
sample_size = 256
node_counts = [16]
sigmas = [1.0]
models = ["linear"]
"#;

#[test]
fn generate_simulate_learn_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let (g, d, p, t) = (dir.path().join("g.txt"), dir.path().join("d.csv"), dir.path().join("p.txt"), dir.path().join("t.csv"));
    ok(&["generate", "--nodes", "10", "--gamma", "1.0", "--seed", "4", "--out", path(&g)]);
    let text = fs::read_to_string(&g).unwrap();
    assert!(text.starts_with("dag 10"));
    assert_eq!(text.lines().filter(|l| l.starts_with("d ")).count(), 9);

    ok(&["simulate", "--graph", path(&g), "--sigma", "0.5", "--samples", "300", "--seed", "1", "--out", path(&d)]);
    let data = fs::read_to_string(&d).unwrap();
    assert_eq!(data.lines().count(), 301);
    assert!(data.starts_with("x0,x1,"));

    for alg in ["pc_stable", "grow_shrink", "fast_iamb"] {
        ok(&["learn", "--data", path(&d), "--algorithm", alg, "--out", path(&p), "--trace", path(&t)]);
        assert!(fs::read_to_string(&p).unwrap().starts_with("pdag 10"));
        assert!(fs::read_to_string(&t).unwrap().starts_with("x,y,z,statistic,p_value,independent,flag"));
    }
    let dot = ok(&["learn", "--data", path(&d), "--test", "mi-gaussian", "--format", "dot"]);
    assert!(String::from_utf8(dot.stdout).unwrap().contains("digraph"));
}

#[test]
fn generation_is_seeded() {
    let a = ok(&["generate", "--nodes", "30", "--gamma", "1.25", "--seed", "9"]).stdout;
    let b = ok(&["generate", "--nodes", "30", "--gamma", "1.25", "--seed", "9"]).stdout;
    let c = ok(&["generate", "--nodes", "30", "--gamma", "1.25", "--seed", "10"]).stdout;
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn bench_writes_all_artifacts_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.toml");
    fs::write(&cfg, SMALL).unwrap();
    let (o1, o2) = (dir.path().join("a"), dir.path().join("b"));
    ok(&["bench", "--config", path(&cfg), "--out", path(&o1)]);
    ok(&["bench", "--config", path(&cfg), "--out", path(&o2), "--workers", "3", "--trace"]);

    let runs = fs::read_to_string(o1.join("runs.csv")).unwrap();
    assert_eq!(runs.lines().next().unwrap(), RUNS_CSV_HEADER);
    assert_eq!(runs.lines().count(), 1 + 3 * 3 * 3);
    assert_eq!(runs, fs::read_to_string(o2.join("runs.csv")).unwrap());

    let pv = fs::read_to_string(o1.join("pvalues.csv")).unwrap();
    assert_eq!(pv.lines().next().unwrap(), PVALUES_CSV_HEADER);
    assert_eq!(pv.lines().count(), 1 + 3);
    assert!(o1.join("plots/box_linear_16_1.svg").exists());
    assert!(o1.join("plots/pvalues_linear.svg").exists());
    assert_eq!(fs::read_dir(o2.join("traces")).unwrap().count(), 27);

    let saved = ExperimentConfig::load(&o1.join("config.toml")).unwrap();
    assert_eq!(saved.n_reps, 3);
}

#[test]
fn flags_override_the_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.toml");
    fs::write(&cfg, SMALL).unwrap();
    let (o1, o2) = (dir.path().join("a"), dir.path().join("b"));
    ok(&["bench", "--config", path(&cfg), "--out", path(&o1), "--seed", "1"]);
    ok(&["bench", "--config", path(&cfg), "--out", path(&o2), "--seed", "2", "--eval-mode", "cpdag-skeleton"]);
    let a = read_csv(&o1.join("runs.csv")).unwrap();
    let b = read_csv(&o2.join("runs.csv")).unwrap();
    assert_ne!(a[0].run_seed, b[0].run_seed);
    // a skeleton reference of a tree has exactly n - 1 edges
    let c = b[0].counts.unwrap();
    assert_eq!(c.tp + c.fn_, 15);
}

#[test]
fn stats_and_plot_read_runs_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.toml");
    fs::write(&cfg, SMALL).unwrap();
    let out = dir.path().join("o");
    ok(&["bench", "--config", path(&cfg), "--out", path(&out)]);
    let runs = out.join("runs.csv");
    let stats = ok(&["stats", "--runs", path(&runs), "--config", path(&cfg)]);
    assert_eq!(String::from_utf8(stats.stdout).unwrap(), fs::read_to_string(out.join("pvalues.csv")).unwrap());
    let plots = dir.path().join("p");
    let listed = ok(&["plot", "--runs", path(&runs), "--out", path(&plots)]);
    assert_eq!(String::from_utf8(listed.stdout).unwrap().lines().count(), 2);
}

#[test]
fn shipped_config_is_the_default_grid() {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/paper.toml");
    assert_eq!(ExperimentConfig::load(&p).unwrap(), ExperimentConfig::default());
}

#[test]
fn config_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "alpha = 2.0\n").unwrap();
    let out = bnbench(&["bench", "--config", path(&cfg), "--out", path(dir.path())]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("alpha"));
    assert_eq!(bnbench(&["bench", "--workers", "0", "--out", path(dir.path())]).status.code(), Some(1));
    assert_eq!(bnbench(&["bench", "--no-such-flag"]).status.code(), Some(1));
    assert_eq!(bnbench(&["generate", "--nodes", "1", "--gamma", "1"]).status.code(), Some(1));
    assert_eq!(bnbench(&["stats", "--runs", "/nonexistent/runs.csv"]).status.code(), Some(1));
    assert_eq!(bnbench(&["--help"]).status.code(), Some(0));
}

#[test]
fn partial_failures_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.toml");
    fs::write(&cfg, SMALL).unwrap();
    let out = dir.path().join("o");
    // a directory where one run's trace file should go makes that run fail
    fs::create_dir_all(out.join("traces/trace_B_linear_16_1_pc_stable_1.csv")).unwrap();
    let res = bnbench(&["bench", "--config", path(&cfg), "--out", path(&out), "--trace"]);
    assert_eq!(res.status.code(), Some(2), "{}", String::from_utf8_lossy(&res.stderr));
    let runs = read_csv(&out.join("runs.csv")).unwrap();
    assert_eq!(runs.len(), 27);
    let failed: Vec<_> = runs.iter().filter(|r| !r.is_ok()).collect();
    assert_eq!(failed.len(), 1);
    assert!(failed[0].status.starts_with("failed: "));
    assert_eq!((failed[0].topology.as_str(), failed[0].rep), ("B", 1));
}
