//! Monte Carlo estimation of coverage probability and expected coverage,
//! with a brute-force exact oracle for desk-scale graphs.
//!
//! Every estimator derives one child stream per simulation run
//! (`rng.substream(r)` for run `r`), so runs can be partitioned across
//! workers in any way and the reduced counts stay identical to a sequential
//! pass over the same stream assignment.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::diffusion::{self, DiffusionError, RngStream, TargetMask};
use crate::fmath;
use crate::graph::{GraphError, NodeId, ProbGraph};

/// Hard cap on brute-force enumeration (`2^25` edge subsets).
pub const BRUTE_FORCE_EDGE_LIMIT: usize = 25;

#[derive(Debug, Clone, PartialEq)]
pub enum EstimateError {
    Diffusion(DiffusionError),
    /// `runs`/`samples` outside the documented domain.
    Domain(&'static str),
    /// Brute-force enumeration refused: too many edges.
    TooLarge {
        edges: usize,
        limit: usize,
    },
}

impl fmt::Display for EstimateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EstimateError::Diffusion(e) => write!(f, "{e}"),
            EstimateError::Domain(msg) => write!(f, "{msg}"),
            EstimateError::TooLarge { edges, limit } => {
                write!(f, "{edges} edges exceed the brute-force limit of {limit}")
            }
        }
    }
}

impl core::error::Error for EstimateError {}

impl From<DiffusionError> for EstimateError {
    fn from(e: DiffusionError) -> Self {
        EstimateError::Diffusion(e)
    }
}

impl From<GraphError> for EstimateError {
    fn from(e: GraphError) -> Self {
        EstimateError::Diffusion(DiffusionError::Graph(e))
    }
}

/// Coverage samples from one simulation run per child stream `0..runs`.
fn coverage_samples(
    graph: &ProbGraph,
    target: &[NodeId],
    seeds: &[NodeId],
    runs: u32,
    rng: &RngStream,
) -> Result<Vec<u32>, EstimateError> {
    graph.require_assigned()?;
    graph.check_nodes(seeds)?;
    let target = TargetMask::build(graph, target)?;
    let mut active = vec![false; graph.node_count()];
    let mut samples = Vec::with_capacity(runs as usize);
    for r in 0..runs {
        active.fill(false);
        let mut gen = rng.substream(u64::from(r)).rng();
        samples.push(diffusion::run_cascade(
            graph,
            seeds,
            &target.mask,
            &mut active,
            &mut gen,
        ));
    }
    Ok(samples)
}

/// Estimate `Pr(coverage >= eta)` as the fraction of `runs` independent
/// cascades whose coverage reaches `eta`.
pub fn mc_coverage_prob(
    graph: &ProbGraph,
    target: &[NodeId],
    seeds: &[NodeId],
    eta: u32,
    runs: u32,
    rng: &RngStream,
) -> Result<f64, EstimateError> {
    if runs == 0 {
        return Err(EstimateError::Domain("runs must be at least 1"));
    }
    let samples = coverage_samples(graph, target, seeds, runs, rng)?;
    let hits = samples.iter().filter(|&&c| c >= eta).count();
    Ok(hits as f64 / f64::from(runs))
}

/// Number of runs sufficient for the estimate of `mc_coverage_prob` to land
/// within `eps` of the truth with probability at least `1 - 1/n^delta`
/// (Hoeffding): `ceil(ln(2 n^delta) / (2 eps^2))`.
pub fn required_runs(n: u64, delta: f64, eps: f64) -> Result<u64, EstimateError> {
    if n == 0 {
        return Err(EstimateError::Domain("n must be at least 1"));
    }
    if delta <= 0.0 {
        return Err(EstimateError::Domain("delta must be positive"));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(EstimateError::Domain("eps must lie in (0, 1)"));
    }
    let ln_bound = fmath::ln(2.0) + delta * fmath::ln(n as f64);
    Ok(fmath::ceil(ln_bound / (2.0 * eps * eps)) as u64)
}

/// Arithmetic mean of coverage over `samples` independent cascades.
pub fn expected_coverage(
    graph: &ProbGraph,
    target: &[NodeId],
    seeds: &[NodeId],
    samples: u32,
    rng: &RngStream,
) -> Result<f64, EstimateError> {
    if samples == 0 {
        return Err(EstimateError::Domain("samples must be at least 1"));
    }
    let cov = coverage_samples(graph, target, seeds, samples, rng)?;
    Ok(cov.iter().map(|&c| f64::from(c)).sum::<f64>() / f64::from(samples))
}

/// Empirical summary of the coverage distribution of one seed set.
#[derive(Clone, Debug)]
pub struct CoverageStats {
    pub runs: u32,
    pub mean: f64,
    /// Unbiased sample variance (divisor `runs - 1`).
    pub variance: f64,
    pub stddev: f64,
    tail: Vec<f64>,
}

impl CoverageStats {
    /// Empirical `Pr(coverage >= eta)`; zero beyond the target size.
    pub fn tail_prob(&self, eta: u32) -> f64 {
        self.tail.get(eta as usize).copied().unwrap_or(0.0)
    }
}

/// Mean, unbiased variance, and the empirical tail function of coverage over
/// `runs >= 2` independent cascades.
pub fn coverage_stats(
    graph: &ProbGraph,
    target: &[NodeId],
    seeds: &[NodeId],
    runs: u32,
    rng: &RngStream,
) -> Result<CoverageStats, EstimateError> {
    if runs < 2 {
        return Err(EstimateError::Domain("variance needs at least 2 runs"));
    }
    let target_size = TargetMask::build(graph, target)?.count;
    let samples = coverage_samples(graph, target, seeds, runs, rng)?;
    let n = f64::from(runs);
    let mean = samples.iter().map(|&c| f64::from(c)).sum::<f64>() / n;
    let ss: f64 = samples
        .iter()
        .map(|&c| {
            let d = f64::from(c) - mean;
            d * d
        })
        .sum();
    let variance = ss / (n - 1.0);
    let mut counts = vec![0u32; target_size + 1];
    for &c in &samples {
        counts[c as usize] += 1;
    }
    let mut tail = vec![0.0; target_size + 1];
    let mut acc = 0u32;
    for k in (0..=target_size).rev() {
        acc += counts[k];
        tail[k] = f64::from(acc) / n;
    }
    Ok(CoverageStats {
        runs,
        mean,
        variance,
        stddev: fmath::sqrt(variance),
        tail,
    })
}

/// Exact distribution of coverage, indexed `0..=|target|`.
#[derive(Clone, Debug)]
pub struct ExactDistribution {
    probs: Vec<f64>,
}

impl ExactDistribution {
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// `Pr(coverage >= eta)`.
    pub fn tail(&self, eta: u32) -> f64 {
        self.probs.iter().skip(eta as usize).sum()
    }

    pub fn mean(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(j, &p)| j as f64 * p)
            .sum()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.probs
            .iter()
            .enumerate()
            .map(|(j, &p)| {
                let d = j as f64 - mean;
                d * d * p
            })
            .sum()
    }
}

/// Exact coverage distribution by enumerating all `2^|E|` live-edge
/// configurations: each configuration's reachability coverage accumulates
/// its probability `prod p_e * prod (1 - p_e)`.
///
/// This is the test oracle; it deliberately shares no reachability code with
/// the simulator.
pub fn brute_force_distribution(
    graph: &ProbGraph,
    target: &[NodeId],
    seeds: &[NodeId],
) -> Result<ExactDistribution, EstimateError> {
    graph.require_assigned()?;
    graph.check_nodes(seeds)?;
    let edges: Vec<(usize, usize, f64)> = graph
        .edges()
        .map(|(u, v, p)| (u.index(), v.index(), p))
        .collect();
    if edges.len() > BRUTE_FORCE_EDGE_LIMIT {
        return Err(EstimateError::TooLarge {
            edges: edges.len(),
            limit: BRUTE_FORCE_EDGE_LIMIT,
        });
    }
    let target = TargetMask::build(graph, target)?;
    let n = graph.node_count();
    let mut probs = vec![0.0; target.count + 1];
    let mut reached = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    for mask in 0u64..(1u64 << edges.len()) {
        let mut weight = 1.0;
        for (i, &(_, _, p)) in edges.iter().enumerate() {
            weight *= if mask & (1 << i) != 0 { p } else { 1.0 - p };
            if weight == 0.0 {
                break;
            }
        }
        if weight == 0.0 {
            continue;
        }
        reached.fill(false);
        stack.clear();
        for &s in seeds {
            if !reached[s.index()] {
                reached[s.index()] = true;
                stack.push(s.index());
            }
        }
        while let Some(u) = stack.pop() {
            for (i, &(src, dst, _)) in edges.iter().enumerate() {
                if src == u && mask & (1 << i) != 0 && !reached[dst] {
                    reached[dst] = true;
                    stack.push(dst);
                }
            }
        }
        let coverage = reached
            .iter()
            .zip(target.mask.iter())
            .filter(|(&r, &t)| r && t)
            .count();
        probs[coverage] += weight;
    }
    Ok(ExactDistribution { probs })
}
