use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::ci::TestKind;
use crate::error::{io_err, Error, Result};
use crate::eval::EvalMode;
use crate::learn::Algorithm;
use crate::sem::Model;

/// A labelled attachment exponent, e.g. `B` for `gamma = 0.25`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopologyLevel {
    pub label: String,
    pub gamma: f64,
}

impl TopologyLevel {
    pub fn new(label: &str, gamma: f64) -> Self {
        Self { label: label.to_string(), gamma }
    }
}

/// CI test used for each data model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TestChoice {
    pub linear: TestKind,
    pub nonlinear: TestKind,
}

impl Default for TestChoice {
    fn default() -> Self {
        Self { linear: TestKind::FisherZ, nonlinear: TestKind::MiGaussian }
    }
}

impl TestChoice {
    pub fn for_model(&self, m: Model) -> TestKind {
        match m {
            Model::Linear => self.linear,
            Model::Nonlinear => self.nonlinear,
        }
    }
}

/// Everything that determines the output of a benchmark grid.
///
/// Read from TOML; omitted keys take the values of [`ExperimentConfig::default`],
/// which is the full B/L/U grid over both models, 48 and 64 nodes, and
/// noise levels 3 and 6 with 20 replicates of 1024 samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub master_seed: u64,
    pub n_reps: usize,
    pub sample_size: usize,
    pub node_counts: Vec<usize>,
    pub sigmas: Vec<f64>,
    pub topologies: Vec<TopologyLevel>,
    pub models: Vec<Model>,
    pub algorithms: Vec<Algorithm>,
    pub alpha: f64,
    pub eval_mode: EvalMode,
    /// Fresh DAG for every replicate; otherwise one DAG per
    /// `(topology, n_nodes)` shared by all replicates.
    pub regenerate_dag_per_rep: bool,
    pub workers: usize,
    /// Cap on conditioning-set size in the exhaustive separating-set
    /// searches; `None` for no cap.
    pub max_condset: Option<usize>,
    pub tests: TestChoice,
    /// Topology labels compared by the rank-sum test.
    pub compare: [String; 2],
    /// Fill `runtime_ms`. Off by default because timings make `runs.csv`
    /// differ between otherwise identical runs.
    pub record_runtime: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            master_seed: 20_240_601,
            n_reps: 20,
            sample_size: 1 << 10,
            node_counts: vec![48, 64],
            sigmas: vec![3.0, 6.0],
            topologies: vec![TopologyLevel::new("B", 0.25), TopologyLevel::new("L", 1.0), TopologyLevel::new("U", 1.25)],
            models: vec![Model::Linear, Model::Nonlinear],
            algorithms: Algorithm::ALL.to_vec(),
            alpha: 0.05,
            eval_mode: EvalMode::Moral,
            regenerate_dag_per_rep: true,
            workers: 1,
            max_condset: Some(DEFAULT_MAX_CONDSET),
            tests: TestChoice::default(),
            compare: ["B".into(), "U".into()],
            record_runtime: false,
        }
    }
}

/// Hub nodes of super-linear trees reach in-degrees near 30, where an
/// uncapped subset search would need on the order of 2^30 tests per edge.
pub const DEFAULT_MAX_CONDSET: usize = 3;

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.n_reps < 1 {
            return bad("n_reps must be at least 1".into());
        }
        if self.sample_size < 8 {
            return bad(format!("sample_size must be at least 8, got {}", self.sample_size));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha must lie in (0, 1), got {}", self.alpha));
        }
        if let Some(n) = self.node_counts.iter().find(|&&n| n < 2) {
            return bad(format!("node counts must be at least 2, got {n}"));
        }
        if let Some(s) = self.sigmas.iter().find(|s| !(s.is_finite() && **s >= 0.0)) {
            return bad(format!("sigmas must be finite and non-negative, got {s}"));
        }
        for t in &self.topologies {
            if !(t.gamma.is_finite() && t.gamma >= 0.0) {
                return bad(format!("gamma for `{}` must be finite and non-negative", t.label));
            }
            if t.label.is_empty() || t.label.contains([',', '"', '\n']) {
                return bad(format!("bad topology label `{}`", t.label));
            }
        }
        for (i, t) in self.topologies.iter().enumerate() {
            if self.topologies[..i].iter().any(|u| u.label == t.label) {
                return bad(format!("duplicate topology label `{}`", t.label));
            }
        }
        if self.workers < 1 {
            return bad("workers must be at least 1".into());
        }
        Ok(())
    }

    /// Number of runs the grid will produce.
    pub fn n_runs(&self) -> usize {
        self.topologies.len() * self.models.len() * self.node_counts.len() * self.sigmas.len() * self.algorithms.len() * self.n_reps
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_the_full_grid() {
        let c = ExperimentConfig::default();
        c.validate().unwrap();
        assert_eq!(c.n_runs(), 3 * 2 * 2 * 2 * 3 * 20);
    }

    #[test]
    fn partial_toml_fills_defaults() {
        let c = ExperimentConfig::from_toml(
            r#"
            master_seed = 5
            n_reps = 2
            models = ["linear"]
            algorithms = ["pc_stable", "fast_iamb"]
            eval_mode = "cpdag-skeleton"
            max_condset = 2

            [[topologies]]
            label = "X"
            gamma = 2.0
            "#,
        )
        .unwrap();
        assert_eq!(c.master_seed, 5);
        assert_eq!(c.models, vec![Model::Linear]);
        assert_eq!(c.algorithms, vec![Algorithm::PcStable, Algorithm::FastIamb]);
        assert_eq!(c.eval_mode, EvalMode::CpdagSkeleton);
        assert_eq!(c.topologies, vec![TopologyLevel::new("X", 2.0)]);
        assert_eq!(c.sample_size, 1024);
        assert_eq!(c.max_condset, Some(2));
    }

    #[test]
    fn toml_round_trip() {
        let c = ExperimentConfig::default();
        assert_eq!(ExperimentConfig::from_toml(&c.to_toml()).unwrap(), c);
    }

    #[test]
    fn rejects_bad_values() {
        for text in [
            "n_reps = 0",
            "sample_size = 4",
            "alpha = 1.5",
            "sigmas = [-1.0]",
            "unknown_key = 3",
            "workers = 0",
            "[[topologies]]\nlabel = \"B\"\ngamma = -1.0",
            "[[topologies]]\nlabel = \"B\"\ngamma = 1.0\n[[topologies]]\nlabel = \"B\"\ngamma = 2.0",
        ] {
            assert!(matches!(ExperimentConfig::from_toml(text), Err(Error::Config(_))), "{text}");
        }
    }
}
