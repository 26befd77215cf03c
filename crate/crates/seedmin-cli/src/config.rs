//! Run configuration: CLI flags, optional TOML config file, environment
//! overrides, and batch validation.
//!
//! Precedence: flags override the config file; `SEEDMIN_SEED` and
//! `SEEDMIN_JOBS` override both.

use std::fs;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Deserialize;

use seedmin::diffusion::Model;
use seedmin::solve::SearchMode;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Weighting {
    /// Use probabilities from the input file as-is.
    Given,
    /// `1 / in-degree(v)` on every edge into `v`.
    WeightedCascade,
    /// `d(u, v) / d(v)` from repeated-line multiplicities (and an optional
    /// volumes file).
    Collaboration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Greedy,
    Random,
    HighDegree,
    Pagerank,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Greedy => "greedy",
            Method::Random => "random",
            Method::HighDegree => "high_degree",
            Method::Pagerank => "pagerank",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvaluatorKind {
    /// Monte Carlo estimation (any graph).
    MonteCarlo,
    /// Exact dynamic programming; requires a one-way bipartite graph.
    ExactBipartite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchKind {
    Linear,
    Binary,
}

impl From<SearchKind> for SearchMode {
    fn from(k: SearchKind) -> SearchMode {
        match k {
            SearchKind::Linear => SearchMode::Linear,
            SearchKind::Binary => SearchMode::Binary,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Ic,
    Lt,
}

impl From<ModelKind> for Model {
    fn from(k: ModelKind) -> Model {
        match k {
            ModelKind::Ic => Model::Ic,
            ModelKind::Lt => Model::Lt,
        }
    }
}

/// Flags shared by every experiment subcommand. All optional here; defaults
/// and file values resolve in [`RunConfig::resolve`].
#[derive(Debug, Clone, Default, Args)]
pub struct RunFlags {
    /// TOML config file; flags given on the command line override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Edge-list file.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Probability assignment scheme.
    #[arg(long, value_enum)]
    pub weighting: Option<Weighting>,
    /// Treat each input line as an undirected pair.
    #[arg(long)]
    pub undirected: bool,
    /// Reverse every edge before weighting.
    #[arg(long)]
    pub reverse: bool,
    /// Volumes file for collaboration weighting.
    #[arg(long)]
    pub volumes: Option<PathBuf>,
    /// Target set: a file of node labels, or ALL.
    #[arg(long)]
    pub target: Option<String>,
    /// Coverage threshold.
    #[arg(long)]
    pub eta: Option<u32>,
    /// Probability threshold in (0, 1).
    #[arg(long)]
    pub p: Option<f64>,
    /// Estimator slack added to the threshold; in [0, (1-p)/2).
    #[arg(long)]
    pub eps: Option<f64>,
    /// Monte Carlo runs per probability evaluation.
    #[arg(long)]
    pub runs: Option<u32>,
    /// Root random seed (SEEDMIN_SEED overrides).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Seed-ranking method.
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// Coverage-probability evaluator.
    #[arg(long, value_enum)]
    pub evaluator: Option<EvaluatorKind>,
    /// Prefix search mode.
    #[arg(long, value_enum)]
    pub search: Option<SearchKind>,
    /// Live-edge samples per greedy evaluation.
    #[arg(long)]
    pub samples_per_eval: Option<u32>,
    /// Diffusion model for exact bipartite computations.
    #[arg(long, value_enum)]
    pub model: Option<ModelKind>,
    /// PageRank restart probability.
    #[arg(long)]
    pub restart: Option<f64>,
    /// PageRank L1 convergence tolerance.
    #[arg(long)]
    pub l1_tol: Option<f64>,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Append a wall-clock column to solve output (off by default so CSVs
    /// stay byte-reproducible).
    #[arg(long)]
    pub timing: bool,
    /// Concurrent sweep points (SEEDMIN_JOBS overrides).
    #[arg(long)]
    pub jobs: Option<usize>,
}

/// The same knobs as optional TOML keys.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub graph: Option<PathBuf>,
    pub weighting: Option<Weighting>,
    pub undirected: Option<bool>,
    pub reverse: Option<bool>,
    pub volumes: Option<PathBuf>,
    pub target: Option<String>,
    pub eta: Option<u32>,
    pub p: Option<f64>,
    pub eps: Option<f64>,
    pub runs: Option<u32>,
    pub seed: Option<u64>,
    pub method: Option<Method>,
    pub evaluator: Option<EvaluatorKind>,
    pub search: Option<SearchKind>,
    pub samples_per_eval: Option<u32>,
    pub model: Option<ModelKind>,
    pub restart: Option<f64>,
    pub l1_tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub timing: Option<bool>,
    pub jobs: Option<usize>,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub graph: PathBuf,
    pub weighting: Weighting,
    pub undirected: bool,
    pub reverse: bool,
    pub volumes: Option<PathBuf>,
    pub target: String,
    pub eta: u32,
    pub p: f64,
    pub eps: f64,
    pub runs: u32,
    pub seed: u64,
    pub method: Method,
    pub evaluator: EvaluatorKind,
    pub search: SearchKind,
    pub samples_per_eval: u32,
    pub model: ModelKind,
    pub restart: f64,
    pub l1_tol: f64,
    pub out: Option<PathBuf>,
    pub timing: bool,
    pub jobs: usize,
}

impl RunConfig {
    /// Merge flags over the config file over defaults, apply environment
    /// overrides, and validate everything at once.
    pub fn resolve(flags: &RunFlags) -> Result<RunConfig, CliError> {
        let file: FileConfig = match &flags.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
                toml::from_str(&text)
                    .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?
            }
            None => FileConfig::default(),
        };

        let seed = env_override("SEEDMIN_SEED")?
            .or(flags.seed)
            .or(file.seed)
            .unwrap_or(1);
        let jobs = env_override("SEEDMIN_JOBS")?
            .or(flags.jobs)
            .or(file.jobs)
            .unwrap_or(1);

        let cfg = RunConfig {
            graph: flags.graph.clone().or(file.graph).unwrap_or_default(),
            weighting: flags
                .weighting
                .or(file.weighting)
                .unwrap_or(Weighting::Given),
            undirected: flags.undirected || file.undirected.unwrap_or(false),
            reverse: flags.reverse || file.reverse.unwrap_or(false),
            volumes: flags.volumes.clone().or(file.volumes),
            target: flags
                .target
                .clone()
                .or(file.target)
                .unwrap_or_else(|| "ALL".to_string()),
            eta: flags.eta.or(file.eta).unwrap_or(0),
            p: flags.p.or(file.p).unwrap_or(0.5),
            eps: flags.eps.or(file.eps).unwrap_or(0.01),
            runs: flags.runs.or(file.runs).unwrap_or(10_000),
            seed,
            method: flags.method.or(file.method).unwrap_or(Method::Greedy),
            evaluator: flags
                .evaluator
                .or(file.evaluator)
                .unwrap_or(EvaluatorKind::MonteCarlo),
            search: flags.search.or(file.search).unwrap_or(SearchKind::Linear),
            samples_per_eval: flags
                .samples_per_eval
                .or(file.samples_per_eval)
                .unwrap_or(100),
            model: flags.model.or(file.model).unwrap_or(ModelKind::Ic),
            restart: flags.restart.or(file.restart).unwrap_or(0.15),
            l1_tol: flags.l1_tol.or(file.l1_tol).unwrap_or(1e-4),
            out: flags.out.clone().or(file.out),
            timing: flags.timing || file.timing.unwrap_or(false),
            jobs,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let mut violations = Vec::new();
        if self.graph.as_os_str().is_empty() {
            violations.push("--graph is required".to_string());
        }
        if self.eta == 0 {
            violations.push("--eta must be a positive integer".to_string());
        }
        if !(self.p > 0.0 && self.p < 1.0) {
            violations.push(format!("--p {} must lie in (0, 1)", self.p));
        } else {
            let exact = self.evaluator == EvaluatorKind::ExactBipartite;
            if !exact && !(0.0..(1.0 - self.p) / 2.0).contains(&self.eps) {
                violations.push(format!(
                    "--eps {} must lie in [0, {})",
                    self.eps,
                    (1.0 - self.p) / 2.0
                ));
            }
        }
        if self.runs == 0 {
            violations.push("--runs must be at least 1".to_string());
        }
        if self.samples_per_eval == 0 {
            violations.push("--samples-per-eval must be at least 1".to_string());
        }
        if !(self.restart > 0.0 && self.restart < 1.0) {
            violations.push(format!("--restart {} must lie in (0, 1)", self.restart));
        }
        if self.l1_tol <= 0.0 {
            violations.push(format!("--l1-tol {} must be positive", self.l1_tol));
        }
        if self.jobs == 0 {
            violations.push("--jobs must be at least 1".to_string());
        }
        if self.volumes.is_some() && self.weighting != Weighting::Collaboration {
            violations.push("--volumes only applies to collaboration weighting".to_string());
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(CliError::Config(violations))
        }
    }
}

fn env_override<T: std::str::FromStr>(name: &str) -> Result<Option<T>, CliError> {
    match std::env::var(name) {
        Ok(v) => v
            .parse()
            .map(Some)
            .map_err(|_| CliError::Config(vec![format!("bad {name} value {v:?}")])),
        Err(_) => Ok(None),
    }
}
