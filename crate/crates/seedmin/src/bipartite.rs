//! Exact coverage computation on one-way bipartite graphs.
//!
//! With all edges running left-to-right, right-node activations are mutually
//! independent given the seed set, so the coverage count is a sum of
//! independent Bernoulli variables. A dynamic program over right nodes gives
//! the full distribution: with `a[i][j]` the probability that exactly `j` of
//! the first `i` right nodes activate,
//!
//! ```text
//! a[i][j] = a[i-1][j] * (1 - p(S, v_i)) + a[i-1][j-1] * p(S, v_i)
//! ```
//!
//! (the `j = 0` and `j = i` boundaries keep only the surviving branch).
//!
//! The same structure admits a two-stage algorithm for the full-coverage
//! case `eta = m`: a greedy set cover guarantees every target can be
//! reached, then a second greedy round on the log of the all-targets success
//! probability (a monotone submodular function) lifts that probability over
//! the requested threshold.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::diffusion::{self, DiffusionError, Model};
use crate::fmath;
use crate::graph::{BipartiteGraph, GraphError, NodeId};

#[derive(Debug, Clone, PartialEq)]
pub enum BipartiteError {
    Diffusion(DiffusionError),
    /// A seed is not a left-side node.
    SeedNotLeft(u32),
    /// `eta` exceeds the number of right nodes.
    EtaExceedsTargets {
        eta: u32,
        m: usize,
    },
    /// Some right node has no in-edge, so no seed set can cover it.
    Uncoverable(u32),
    /// Stage-two seed sets must be disjoint from stage one.
    OverlappingSets(u32),
    /// `p(S1, v) = 0` for some target: the cover used a zero-probability edge.
    LogDomain(u32),
    /// The threshold is unreachable even with every left node seeded.
    Infeasible {
        best: f64,
    },
    /// Probability threshold outside `(0, 1)`.
    BadThreshold(f64),
    /// Two-stage algorithm needs all edge probabilities strictly positive.
    ZeroProbEdge,
}

impl fmt::Display for BipartiteError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BipartiteError::Diffusion(e) => write!(f, "{e}"),
            BipartiteError::SeedNotLeft(v) => write!(f, "seed {v} is not a left-side node"),
            BipartiteError::EtaExceedsTargets { eta, m } => {
                write!(f, "eta = {eta} exceeds the {m} target nodes")
            }
            BipartiteError::Uncoverable(v) => {
                write!(f, "target node {v} has no in-edge and cannot be covered")
            }
            BipartiteError::OverlappingSets(v) => {
                write!(f, "node {v} appears in both seed sets")
            }
            BipartiteError::LogDomain(v) => {
                write!(f, "p(S1, {v}) = 0: log-gain undefined for this cover")
            }
            BipartiteError::Infeasible { best } => write!(
                f,
                "threshold unreachable: seeding every left node only achieves {best}"
            ),
            BipartiteError::BadThreshold(p) => {
                write!(f, "probability threshold {p} not in (0, 1)")
            }
            BipartiteError::ZeroProbEdge => {
                write!(
                    f,
                    "two-stage algorithm requires edge probabilities in (0, 1]"
                )
            }
        }
    }
}

impl core::error::Error for BipartiteError {}

impl From<DiffusionError> for BipartiteError {
    fn from(e: DiffusionError) -> Self {
        BipartiteError::Diffusion(e)
    }
}

fn left_mask(bgraph: &BipartiteGraph, seeds: &[NodeId]) -> Result<Vec<bool>, BipartiteError> {
    bgraph.left_mask(seeds).map_err(|e| match e {
        GraphError::NodeOutOfRange { id, .. } => BipartiteError::SeedNotLeft(id),
        other => BipartiteError::Diffusion(other.into()),
    })
}

/// Per-right-node activation probabilities for a seed mask.
fn activation_probs(
    bgraph: &BipartiteGraph,
    seed_mask: &[bool],
    model: Model,
) -> Result<Vec<f64>, BipartiteError> {
    if model == Model::Lt {
        diffusion::validate_lt(bgraph)?;
    }
    Ok((0..bgraph.m())
        .map(|i| diffusion::activation_prob_masked(bgraph, seed_mask, i, model))
        .collect())
}

/// Full triangular table of the coverage dynamic program; row `i` holds the
/// distribution of activations among the first `i` right nodes.
#[derive(Clone, Debug)]
pub struct DpTable {
    rows: Vec<Vec<f64>>,
}

impl DpTable {
    /// Build the table for `seeds` (left-side nodes, original ids).
    pub fn build(
        bgraph: &BipartiteGraph,
        seeds: &[NodeId],
        model: Model,
    ) -> Result<DpTable, BipartiteError> {
        let mask = left_mask(bgraph, seeds)?;
        let probs = activation_probs(bgraph, &mask, model)?;
        let mut rows = Vec::with_capacity(probs.len() + 1);
        rows.push(vec![1.0]);
        for (i, &p) in probs.iter().enumerate() {
            let prev = &rows[i];
            let mut row = vec![0.0; i + 2];
            for j in 0..=i {
                row[j] += prev[j] * (1.0 - p);
                row[j + 1] += prev[j] * p;
            }
            rows.push(row);
        }
        Ok(DpTable { rows })
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.rows.len() - 1
    }

    /// Distribution over exactly-`j` activations among the first `i` targets.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    /// The final coverage distribution, indexed `0..=m`.
    pub fn distribution(&self) -> &[f64] {
        &self.rows[self.rows.len() - 1]
    }

    /// `Pr(coverage >= eta)`; zero beyond `m`.
    pub fn tail(&self, eta: u32) -> f64 {
        self.distribution().iter().skip(eta as usize).sum()
    }

    pub fn mean(&self) -> f64 {
        self.distribution()
            .iter()
            .enumerate()
            .map(|(j, &p)| j as f64 * p)
            .sum()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.distribution()
            .iter()
            .enumerate()
            .map(|(j, &p)| {
                let d = j as f64 - mean;
                d * d * p
            })
            .sum()
    }
}

/// Exact `Pr(coverage >= eta)` for a seed set, keeping only one DP row in
/// memory.
pub fn coverage_prob(
    bgraph: &BipartiteGraph,
    seeds: &[NodeId],
    eta: u32,
    model: Model,
) -> Result<f64, BipartiteError> {
    let m = bgraph.m();
    if eta as usize > m {
        return Err(BipartiteError::EtaExceedsTargets { eta, m });
    }
    let mask = left_mask(bgraph, seeds)?;
    let probs = activation_probs(bgraph, &mask, model)?;
    let mut row = vec![1.0];
    for (i, &p) in probs.iter().enumerate() {
        let mut next = vec![0.0; i + 2];
        for j in 0..=i {
            next[j] += row[j] * (1.0 - p);
            next[j + 1] += row[j] * p;
        }
        row = next;
    }
    Ok(row.iter().skip(eta as usize).sum())
}

/// Largest `eta` whose coverage probability still reaches `prob_threshold`
/// (zero if only the empty guarantee qualifies).
pub fn coverage_quantile(
    bgraph: &BipartiteGraph,
    seeds: &[NodeId],
    prob_threshold: f64,
    model: Model,
) -> Result<u32, BipartiteError> {
    if !(prob_threshold > 0.0 && prob_threshold < 1.0) {
        return Err(BipartiteError::BadThreshold(prob_threshold));
    }
    let table = DpTable::build(bgraph, seeds, model)?;
    let dist = table.distribution();
    let mut tail = 0.0;
    for eta in (1..=table.m()).rev() {
        tail += dist[eta];
        if tail >= prob_threshold {
            return Ok(eta as u32);
        }
    }
    Ok(0)
}

/// Exact expected coverage `sum_v p(S, v)`; by independence this equals the
/// mean of the DP distribution.
pub fn expected_coverage(
    bgraph: &BipartiteGraph,
    seeds: &[NodeId],
    model: Model,
) -> Result<f64, BipartiteError> {
    let mask = left_mask(bgraph, seeds)?;
    Ok(activation_probs(bgraph, &mask, model)?.iter().sum())
}

/// Greedy set cover of the right side: repeatedly take the left node
/// covering the most still-uncovered targets, ties broken by lowest node id.
/// Edge probabilities are irrelevant here; only reachability matters.
#[allow(clippy::needless_range_loop)] // l is a left position, not just an index
pub fn greedy_set_cover(bgraph: &BipartiteGraph) -> Result<Vec<NodeId>, BipartiteError> {
    for (pos, v) in bgraph.right().iter().enumerate() {
        if bgraph.in_edges(pos).is_empty() {
            return Err(BipartiteError::Uncoverable(v.0));
        }
    }
    let m = bgraph.m();
    let mut covered = vec![false; m];
    let mut remaining = m;
    let mut chosen_mask = vec![false; bgraph.left().len()];
    let mut cover = Vec::new();
    while remaining > 0 {
        let mut best: Option<(usize, usize)> = None; // (gain, left position)
        for l in 0..bgraph.left().len() {
            if chosen_mask[l] {
                continue;
            }
            let gain = bgraph
                .out_edges(l)
                .iter()
                .filter(|&&(r, _)| !covered[r])
                .count();
            // left positions ascend by original id, so strict improvement
            // keeps the lowest-id winner
            if gain > 0 && best.is_none_or(|(g, _)| gain > g) {
                best = Some((gain, l));
            }
        }
        let (gain, l) = best.expect("uncovered target with no candidate was ruled out");
        chosen_mask[l] = true;
        cover.push(bgraph.left()[l]);
        for &(r, _) in bgraph.out_edges(l) {
            if !covered[r] {
                covered[r] = true;
            }
        }
        remaining -= gain;
    }
    Ok(cover)
}

/// Gain in the log of the all-targets success probability when `x` joins an
/// existing cover `s1`: `sum_v [ln p(S1 ∪ X, v) - ln p(S1, v)]`.
///
/// Nonnegative, zero at `x = []`, monotone and submodular in `x`.
pub fn log_coverage_gain(
    bgraph: &BipartiteGraph,
    s1: &[NodeId],
    x: &[NodeId],
    model: Model,
) -> Result<f64, BipartiteError> {
    let s1_mask = left_mask(bgraph, s1)?;
    let x_mask = left_mask(bgraph, x)?;
    if let Some(pos) = s1_mask
        .iter()
        .zip(x_mask.iter())
        .position(|(&a, &b)| a && b)
    {
        return Err(BipartiteError::OverlappingSets(bgraph.left()[pos].0));
    }
    let base = activation_probs(bgraph, &s1_mask, model)?;
    let mut joint_mask = s1_mask;
    for (j, &x) in joint_mask.iter_mut().zip(x_mask.iter()) {
        *j |= x;
    }
    let joint = activation_probs(bgraph, &joint_mask, model)?;
    let mut gain = 0.0;
    for (pos, (&b, &j)) in base.iter().zip(joint.iter()).enumerate() {
        if b == 0.0 {
            return Err(BipartiteError::LogDomain(bgraph.right()[pos].0));
        }
        gain += fmath::ln(j) - fmath::ln(b);
    }
    Ok(gain)
}

/// Output of [`two_stage_full_coverage`].
#[derive(Clone, Debug)]
pub struct TwoStageResult {
    /// Greedy set cover of the targets.
    pub stage1: Vec<NodeId>,
    /// Extra seeds raising the all-targets success probability.
    pub stage2: Vec<NodeId>,
    /// `prod_v p(S, v)` for the combined seed set; at least the threshold.
    pub success_prob: f64,
}

impl TwoStageResult {
    pub fn seeds(&self) -> Vec<NodeId> {
        let mut s: Vec<NodeId> = self
            .stage1
            .iter()
            .chain(self.stage2.iter())
            .copied()
            .collect();
        s.sort_unstable();
        s
    }
}

/// Select seeds activating *every* target with probability at least
/// `prob_threshold`.
///
/// Stage one greedily covers all targets; stage two greedily maximizes the
/// marginal gain in log success probability until the product
/// `prod_v p(S, v)` reaches the threshold. Exact evaluation lets the loop
/// run to the true target rather than a relaxed shortfall. Marginal gains
/// are compared in log space; the loop condition and the reported value use
/// the direct product, which cannot underflow once it is near the threshold.
#[allow(clippy::needless_range_loop)] // l is a left position, not just an index
pub fn two_stage_full_coverage(
    bgraph: &BipartiteGraph,
    prob_threshold: f64,
    model: Model,
) -> Result<TwoStageResult, BipartiteError> {
    if !(prob_threshold > 0.0 && prob_threshold < 1.0) {
        return Err(BipartiteError::BadThreshold(prob_threshold));
    }
    if bgraph
        .right()
        .iter()
        .enumerate()
        .any(|(pos, _)| bgraph.in_edges(pos).iter().any(|&(_, p)| p == 0.0))
    {
        return Err(BipartiteError::ZeroProbEdge);
    }
    if model == Model::Lt {
        diffusion::validate_lt(bgraph)?;
    }

    let stage1 = greedy_set_cover(bgraph)?;
    let n_left = bgraph.left().len();

    // feasibility: even the full left side may fall short
    let all_mask = vec![true; n_left];
    let best: f64 = activation_probs(bgraph, &all_mask, model)?.iter().product();
    if best < prob_threshold {
        return Err(BipartiteError::Infeasible { best });
    }

    let mut in_set = vec![false; n_left];
    for s in &stage1 {
        in_set[bgraph.left_position(*s).expect("cover is left-side")] = true;
    }
    // marginal gains score against an incrementally updated probability
    // vector; the stop test and the reported value recompute the canonical
    // product so the result is exactly what an independent evaluation gives
    let mut cur = activation_probs(bgraph, &in_set, model)?;
    let mut stage2 = Vec::new();
    let mut success: f64 = activation_probs(bgraph, &in_set, model)?.iter().product();
    while success < prob_threshold {
        let mut best_gain = f64::NEG_INFINITY;
        let mut best_l = usize::MAX;
        for l in 0..n_left {
            if in_set[l] || bgraph.out_edges(l).is_empty() {
                continue;
            }
            let mut gain = 0.0;
            for &(r, p) in bgraph.out_edges(l) {
                let new_p = match model {
                    Model::Ic => cur[r] + p - cur[r] * p,
                    Model::Lt => cur[r] + p,
                };
                gain += fmath::ln(new_p) - fmath::ln(cur[r]);
            }
            if gain > best_gain {
                best_gain = gain;
                best_l = l;
            }
        }
        debug_assert!(best_l != usize::MAX, "feasibility check admits a gain");
        in_set[best_l] = true;
        stage2.push(bgraph.left()[best_l]);
        for &(r, p) in bgraph.out_edges(best_l) {
            cur[r] = match model {
                Model::Ic => cur[r] + p - cur[r] * p,
                Model::Lt => cur[r] + p,
            };
        }
        success = activation_probs(bgraph, &in_set, model)?.iter().product();
    }

    Ok(TwoStageResult {
        stage1,
        stage2,
        success_prob: success,
    })
}
