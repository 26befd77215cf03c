//! Seed selection: greedy and baseline sequence builders plus the prefix
//! search that returns the smallest seed set meeting a coverage-probability
//! threshold.
//!
//! The solver follows the classic two-phase shape: a ranker orders nodes
//! into a sequence whose prefixes are the candidate seed sets, then each
//! prefix is scored by a coverage-probability evaluator (Monte Carlo on
//! general graphs, the exact DP on one-way bipartite graphs) and the first
//! prefix reaching `P + eps` wins.
//!
//! The greedy ranker maximizes the estimated marginal gain in *expected*
//! coverage. Expected coverage is monotone submodular, which justifies lazy
//! re-evaluation of cached gains; estimates within one greedy round share a
//! common batch of live-edge samples so candidate comparisons see the same
//! randomness.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::bipartite::{self, BipartiteError};
use crate::diffusion::{self, DiffusionError, LiveEdgeTable, Model, RngStream, TargetMask};
use crate::graph::{BipartiteGraph, CoverageInstance, GraphError, NodeId, ProbGraph};

#[derive(Debug, Clone, PartialEq)]
pub enum SolveError {
    Graph(GraphError),
    Diffusion(DiffusionError),
    Bipartite(BipartiteError),
    /// `eps` outside `[0, (1 - P) / 2)`.
    EpsOutOfRange {
        eps: f64,
        prob_threshold: f64,
    },
    /// Monte Carlo prefix solving needs `eta < |target|`; full coverage is
    /// reserved for exact bipartite evaluation or the two-stage algorithm.
    FullCoverageEta,
    /// Sequence contains duplicates or unknown nodes.
    BadSequence(&'static str),
    BadConfig(&'static str),
    /// The evaluator's target set differs from the instance's.
    TargetMismatch,
    /// No prefix qualifies; carries the best prefix observed.
    Infeasible {
        best_prob: f64,
        best_len: usize,
    },
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::Graph(e) => write!(f, "{e}"),
            SolveError::Diffusion(e) => write!(f, "{e}"),
            SolveError::Bipartite(e) => write!(f, "{e}"),
            SolveError::EpsOutOfRange {
                eps,
                prob_threshold,
            } => write!(f, "eps = {eps} outside [0, (1 - {prob_threshold}) / 2)"),
            SolveError::FullCoverageEta => write!(
                f,
                "eta equals the target size; use the bipartite two-stage algorithm"
            ),
            SolveError::BadSequence(msg) => write!(f, "bad seed sequence: {msg}"),
            SolveError::BadConfig(msg) => write!(f, "bad config: {msg}"),
            SolveError::TargetMismatch => {
                write!(f, "evaluator target set differs from the instance target")
            }
            SolveError::Infeasible {
                best_prob,
                best_len,
            } => write!(
                f,
                "no prefix qualifies; best achieved probability {best_prob} at {best_len} seeds"
            ),
        }
    }
}

impl core::error::Error for SolveError {}

impl From<GraphError> for SolveError {
    fn from(e: GraphError) -> Self {
        SolveError::Graph(e)
    }
}

impl From<DiffusionError> for SolveError {
    fn from(e: DiffusionError) -> Self {
        SolveError::Diffusion(e)
    }
}

impl From<BipartiteError> for SolveError {
    fn from(e: BipartiteError) -> Self {
        SolveError::Bipartite(e)
    }
}

/// How a seed sequence was produced.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SequenceMethod {
    Greedy,
    Random,
    HighDegree,
    PageRank,
}

impl fmt::Display for SequenceMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceMethod::Greedy => write!(f, "greedy"),
            SequenceMethod::Random => write!(f, "random"),
            SequenceMethod::HighDegree => write!(f, "high_degree"),
            SequenceMethod::PageRank => write!(f, "pagerank"),
        }
    }
}

/// Ranked nodes without repetition; prefixes are the nested candidate seed
/// sets.
#[derive(Clone, Debug)]
pub struct SeedSequence {
    pub order: Vec<NodeId>,
    /// Per-position score: estimated marginal expected-coverage gain for
    /// greedy, the ranking score for baselines.
    pub gains: Vec<f64>,
    pub method: SequenceMethod,
    /// First prefix length whose estimated expected coverage reached the
    /// configured stopping target, if any.
    pub stop_index: Option<usize>,
}

impl SeedSequence {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn prefix(&self, len: usize) -> &[NodeId] {
        &self.order[..len]
    }
}

/// Knobs for the Monte Carlo greedy ranker.
#[derive(Clone, Copy, Debug)]
pub struct GreedyConfig {
    /// Live-edge sample batch size per greedy round; the estimation accuracy
    /// proxy.
    pub samples_per_eval: u32,
    /// Expected-coverage target used by the stopping rule.
    pub eta: u32,
    /// Stop once the estimate reaches `stop_inflation * eta`. Keep at 1.0
    /// unless the estimator's multiplicative error calls for slack.
    pub stop_inflation: f64,
    /// Lazy (priority-queue) gain re-evaluation; exact evaluation order is
    /// unchanged for submodular objectives, only fewer estimates are run.
    pub lazy: bool,
    /// Stop at the target, or rank every node regardless.
    pub stop_at_target: bool,
}

impl Default for GreedyConfig {
    fn default() -> Self {
        GreedyConfig {
            samples_per_eval: 100,
            eta: 1,
            stop_inflation: 1.0,
            lazy: true,
            stop_at_target: false,
        }
    }
}

#[derive(PartialEq)]
struct HeapEntry {
    gain: f64,
    id: NodeId,
    round: usize,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // max-heap: larger gain first, then lower node id
        self.gain
            .total_cmp(&other.gain)
            .then_with(|| other.id.cmp(&self.id))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Marginal coverage gain of `v` over already-active masks, averaged over
/// the batch.
fn batch_gain(
    tables: &[LiveEdgeTable],
    base_masks: &[Vec<bool>],
    target_mask: &[bool],
    v: NodeId,
    scratch: &mut Vec<u32>,
) -> f64 {
    let mut total = 0u64;
    for (table, base) in tables.iter().zip(base_masks.iter()) {
        if base[v.index()] {
            continue;
        }
        // BFS from v, never entering nodes already reached by the current
        // seeds: their closures are already counted
        scratch.clear();
        scratch.push(v.0);
        let mut seen = vec![false; base.len()];
        seen[v.index()] = true;
        let mut new_cov = 0u64;
        while let Some(u) = scratch.pop() {
            if target_mask[u as usize] {
                new_cov += 1;
            }
            for &w in table.live_out(u as usize) {
                if !seen[w.index()] && !base[w.index()] {
                    seen[w.index()] = true;
                    scratch.push(w.0);
                }
            }
        }
        total += new_cov;
    }
    total as f64 / tables.len() as f64
}

/// Greedy sequence by estimated marginal expected coverage on a general
/// graph.
///
/// Each round draws a fresh batch of `samples_per_eval` live-edge tables
/// from `rng.substream(round)`; all candidates in the round are scored on
/// that shared batch. With `stop_at_target` the sequence ends at the first
/// prefix whose estimated expected coverage reaches
/// `stop_inflation * eta` (which then requires `eta < |target|`); otherwise
/// every node is ranked and the crossing point is only recorded.
pub fn greedy_sequence(
    graph: &ProbGraph,
    target: &[NodeId],
    config: &GreedyConfig,
    rng: &RngStream,
) -> Result<SeedSequence, SolveError> {
    if config.samples_per_eval == 0 {
        return Err(SolveError::BadConfig("samples_per_eval must be at least 1"));
    }
    if config.stop_inflation < 1.0 {
        return Err(SolveError::BadConfig("stop_inflation must be at least 1"));
    }
    graph.require_assigned()?;
    let tm = TargetMask::build(graph, target)?;
    if config.stop_at_target && config.eta as usize >= tm.count {
        return Err(SolveError::BadConfig(
            "expected-coverage stop needs eta < |target|",
        ));
    }
    let n = graph.node_count();
    let mut order = Vec::with_capacity(n);
    let mut gains = Vec::with_capacity(n);
    let mut stop_index = None;
    let mut chosen: Vec<NodeId> = Vec::new();
    let mut heap: BinaryHeap<HeapEntry> = BinaryHeap::new();
    let mut scratch = Vec::new();

    for round in 0..n {
        let round_rng = rng.substream(round as u64);
        let tables: Vec<LiveEdgeTable> = (0..config.samples_per_eval)
            .map(|t| LiveEdgeTable::sample(graph, &round_rng.substream(u64::from(t))))
            .collect::<Result<_, _>>()?;
        let base_masks: Vec<Vec<bool>> = tables.iter().map(|t| t.reach_mask(&chosen)).collect();
        let base_est = base_masks
            .iter()
            .map(|m| {
                m.iter()
                    .zip(tm.mask.iter())
                    .filter(|(&a, &t)| a && t)
                    .count() as u64
            })
            .sum::<u64>() as f64
            / tables.len() as f64;

        let picked = if config.lazy {
            if round == 0 {
                for v in graph.nodes() {
                    let gain = batch_gain(&tables, &base_masks, &tm.mask, v, &mut scratch);
                    heap.push(HeapEntry { gain, id: v, round });
                }
            }
            loop {
                let top = heap.pop().expect("candidates remain while round < n");
                if top.round == round {
                    break top;
                }
                let gain = batch_gain(&tables, &base_masks, &tm.mask, top.id, &mut scratch);
                heap.push(HeapEntry {
                    gain,
                    id: top.id,
                    round,
                });
            }
        } else {
            let mut best: Option<HeapEntry> = None;
            for v in graph.nodes() {
                if chosen.contains(&v) {
                    continue;
                }
                let gain = batch_gain(&tables, &base_masks, &tm.mask, v, &mut scratch);
                let entry = HeapEntry { gain, id: v, round };
                if best.as_ref().is_none_or(|b| entry > *b) {
                    best = Some(entry);
                }
            }
            best.expect("round < n leaves a candidate")
        };

        chosen.push(picked.id);
        order.push(picked.id);
        gains.push(picked.gain);
        let est = base_est + picked.gain;
        if stop_index.is_none() && est >= config.stop_inflation * f64::from(config.eta) {
            stop_index = Some(chosen.len());
            if config.stop_at_target {
                break;
            }
        }
    }

    Ok(SeedSequence {
        order,
        gains,
        method: SequenceMethod::Greedy,
        stop_index,
    })
}

/// Greedy sequence over the left side of a one-way bipartite graph using
/// exact expected-coverage marginals (no estimation error, so plain argmax
/// per round suffices at these sizes).
#[allow(clippy::needless_range_loop)] // l is a left position, not just an index
pub fn greedy_sequence_bipartite(
    bgraph: &BipartiteGraph,
    model: Model,
    limit: Option<usize>,
) -> Result<SeedSequence, SolveError> {
    if model == Model::Lt {
        diffusion::validate_lt(bgraph)?;
    }
    let n_left = bgraph.left().len();
    let limit = limit.unwrap_or(n_left).min(n_left);
    // miss[r]: probability that r stays inactive under the chosen set (IC);
    // for LT the marginal of an unchosen node is constant
    let mut miss = vec![1.0; bgraph.m()];
    let mut taken = vec![false; n_left];
    let mut order = Vec::with_capacity(limit);
    let mut gains = Vec::with_capacity(limit);
    for _ in 0..limit {
        let mut best_gain = f64::NEG_INFINITY;
        let mut best_l = usize::MAX;
        for l in 0..n_left {
            if taken[l] {
                continue;
            }
            let gain: f64 = bgraph
                .out_edges(l)
                .iter()
                .map(|&(r, p)| match model {
                    Model::Ic => miss[r] * p,
                    Model::Lt => p,
                })
                .sum();
            if gain > best_gain {
                best_gain = gain;
                best_l = l;
            }
        }
        taken[best_l] = true;
        order.push(bgraph.left()[best_l]);
        gains.push(best_gain);
        for &(r, p) in bgraph.out_edges(best_l) {
            if model == Model::Ic {
                miss[r] *= 1.0 - p;
            }
        }
    }
    Ok(SeedSequence {
        order,
        gains,
        method: SequenceMethod::Greedy,
        stop_index: None,
    })
}

/// Uniformly random node order (Fisher-Yates under the given stream).
pub fn baseline_random(graph: &ProbGraph, rng: &RngStream) -> SeedSequence {
    use rand::Rng;
    let mut order: Vec<NodeId> = graph.nodes().collect();
    let mut r = rng.rng();
    for i in (1..order.len()).rev() {
        let j = r.gen_range(0..=i);
        order.swap(i, j);
    }
    let gains = vec![0.0; order.len()];
    SeedSequence {
        order,
        gains,
        method: SequenceMethod::Random,
        stop_index: None,
    }
}

/// Nodes by descending out-degree, ties by lowest id.
pub fn baseline_high_degree(graph: &ProbGraph) -> SeedSequence {
    let mut order: Vec<NodeId> = graph.nodes().collect();
    order.sort_by(|&a, &b| {
        graph
            .out_degree(b)
            .cmp(&graph.out_degree(a))
            .then(a.cmp(&b))
    });
    let gains = order.iter().map(|&v| graph.out_degree(v) as f64).collect();
    SeedSequence {
        order,
        gains,
        method: SequenceMethod::HighDegree,
        stop_index: None,
    }
}

/// PageRank scores on the reversed-influence walk.
#[derive(Clone, Debug)]
pub struct PageRankScores {
    pub scores: Vec<f64>,
    pub iterations: u32,
    pub converged: bool,
}

/// Power iteration for influence-aware PageRank.
///
/// A walker at `u` steps *against* influence: it moves to `v` with
/// probability `p_{v,u} / sum_{(w,u) in E} p_{w,u}` (the more strongly `v`
/// influences `u`, the higher `u` ranks `v`). Restart is uniform. Nodes
/// with no weighted in-edges redistribute their mass uniformly. Iteration
/// stops when consecutive score vectors differ by at most `l1_tol` in L1
/// norm; hitting `max_iters` first returns the last iterate flagged
/// unconverged.
pub fn pagerank_scores(
    graph: &ProbGraph,
    restart: f64,
    l1_tol: f64,
    max_iters: u32,
) -> Result<PageRankScores, SolveError> {
    if !(restart > 0.0 && restart < 1.0) {
        return Err(SolveError::BadConfig(
            "restart probability must be in (0, 1)",
        ));
    }
    if l1_tol <= 0.0 {
        return Err(SolveError::BadConfig("L1 tolerance must be positive"));
    }
    graph.require_assigned()?;
    let n = graph.node_count();
    if n == 0 {
        return Ok(PageRankScores {
            scores: Vec::new(),
            iterations: 0,
            converged: true,
        });
    }
    // in_weight[u] normalizes the walk out of u (over influence in-edges)
    let mut in_weight = vec![0.0; n];
    for (_, u, p) in graph.edges() {
        in_weight[u.index()] += p;
    }
    let uniform = 1.0 / n as f64;
    let mut scores = vec![uniform; n];
    let mut next = vec![0.0; n];
    for iter in 1..=max_iters {
        let dangling: f64 = scores
            .iter()
            .zip(in_weight.iter())
            .filter(|(_, &w)| w == 0.0)
            .map(|(&s, _)| s)
            .sum();
        let base = restart * uniform + (1.0 - restart) * dangling * uniform;
        next.fill(base);
        for (v, u, p) in graph.edges() {
            let w = in_weight[u.index()];
            if w > 0.0 {
                next[v.index()] += (1.0 - restart) * scores[u.index()] * p / w;
            }
        }
        let l1: f64 = scores
            .iter()
            .zip(next.iter())
            .map(|(&a, &b)| crate::fmath::abs(a - b))
            .sum();
        core::mem::swap(&mut scores, &mut next);
        if l1 <= l1_tol {
            return Ok(PageRankScores {
                scores,
                iterations: iter,
                converged: true,
            });
        }
    }
    Ok(PageRankScores {
        scores,
        iterations: max_iters,
        converged: false,
    })
}

/// Nodes by descending PageRank score, ties by lowest id.
pub fn baseline_pagerank(
    graph: &ProbGraph,
    restart: f64,
    l1_tol: f64,
) -> Result<SeedSequence, SolveError> {
    let pr = pagerank_scores(graph, restart, l1_tol, 10_000)?;
    let mut order: Vec<NodeId> = graph.nodes().collect();
    order.sort_by(|&a, &b| {
        pr.scores[b.index()]
            .total_cmp(&pr.scores[a.index()])
            .then(a.cmp(&b))
    });
    let gains = order.iter().map(|&v| pr.scores[v.index()]).collect();
    Ok(SeedSequence {
        order,
        gains,
        method: SequenceMethod::PageRank,
        stop_index: None,
    })
}

/// Predicate search over indices `0..len`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SearchMode {
    /// First-true scan; correct for any predicate.
    Linear,
    /// Bisection for the smallest true index. Assumes the predicate is
    /// monotone along the sequence — guaranteed for exact evaluators by
    /// coverage monotonicity, heuristic under Monte Carlo noise.
    Binary,
}

/// Smallest index in `0..len` satisfying the predicate.
pub fn prefix_search<E>(
    len: usize,
    mode: SearchMode,
    mut pred: impl FnMut(usize) -> Result<bool, E>,
) -> Result<Option<usize>, E> {
    match mode {
        SearchMode::Linear => {
            for i in 0..len {
                if pred(i)? {
                    return Ok(Some(i));
                }
            }
            Ok(None)
        }
        SearchMode::Binary => {
            let mut lo = 0;
            let mut hi = len;
            while lo < hi {
                let mid = lo + (hi - lo) / 2;
                if pred(mid)? {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            Ok(if lo < len { Some(lo) } else { None })
        }
    }
}

/// Coverage-probability evaluator plugged into [`min_seed_set`].
pub trait ProbEvaluator {
    fn coverage_prob(&mut self, seeds: &[NodeId]) -> Result<f64, SolveError>;

    /// Exact evaluators force `eps = 0` in the solver.
    fn is_exact(&self) -> bool {
        false
    }

    /// Simulation runs per evaluation, when applicable.
    fn runs(&self) -> Option<u32> {
        None
    }
}

/// Monte Carlo evaluator over a fixed batch of live-edge samples.
///
/// Run `r` always draws its table from `rng.substream(r)`, so different seed
/// sets are scored against identical randomness (common random numbers).
/// Along a nested prefix chain the estimates are therefore monotone, which
/// makes binary prefix search exact with respect to the estimate.
pub struct McEvaluator<'a> {
    graph: &'a ProbGraph,
    target_mask: Vec<bool>,
    eta: u32,
    runs: u32,
    rng: RngStream,
}

impl<'a> McEvaluator<'a> {
    pub fn new(
        graph: &'a ProbGraph,
        target: &[NodeId],
        eta: u32,
        runs: u32,
        rng: RngStream,
    ) -> Result<Self, SolveError> {
        if runs == 0 {
            return Err(SolveError::BadConfig("runs must be at least 1"));
        }
        graph.require_assigned()?;
        let tm = TargetMask::build(graph, target)?;
        Ok(McEvaluator {
            graph,
            target_mask: tm.mask,
            eta,
            runs,
            rng,
        })
    }
}

impl ProbEvaluator for McEvaluator<'_> {
    fn coverage_prob(&mut self, seeds: &[NodeId]) -> Result<f64, SolveError> {
        self.graph.check_nodes(seeds)?;
        let mut hits = 0u32;
        for r in 0..self.runs {
            let table = LiveEdgeTable::sample(self.graph, &self.rng.substream(u64::from(r)))?;
            let mask = table.reach_mask(seeds);
            let cov = mask
                .iter()
                .zip(self.target_mask.iter())
                .filter(|(&a, &t)| a && t)
                .count() as u32;
            if cov >= self.eta {
                hits += 1;
            }
        }
        Ok(f64::from(hits) / f64::from(self.runs))
    }

    fn runs(&self) -> Option<u32> {
        Some(self.runs)
    }
}

/// Exact evaluator backed by the bipartite dynamic program.
pub struct ExactBipartiteEvaluator<'a> {
    bgraph: &'a BipartiteGraph,
    eta: u32,
    model: Model,
}

impl<'a> ExactBipartiteEvaluator<'a> {
    pub fn new(bgraph: &'a BipartiteGraph, eta: u32, model: Model) -> Result<Self, SolveError> {
        if eta as usize > bgraph.m() {
            return Err(SolveError::Bipartite(BipartiteError::EtaExceedsTargets {
                eta,
                m: bgraph.m(),
            }));
        }
        Ok(ExactBipartiteEvaluator { bgraph, eta, model })
    }

    /// Validates that the instance's target set is exactly the right side.
    pub fn for_instance(
        bgraph: &'a BipartiteGraph,
        instance: &CoverageInstance<'_>,
        model: Model,
    ) -> Result<Self, SolveError> {
        if instance.target() != bgraph.right() {
            return Err(SolveError::TargetMismatch);
        }
        Self::new(bgraph, instance.eta(), model)
    }
}

impl ProbEvaluator for ExactBipartiteEvaluator<'_> {
    fn coverage_prob(&mut self, seeds: &[NodeId]) -> Result<f64, SolveError> {
        Ok(bipartite::coverage_prob(
            self.bgraph,
            seeds,
            self.eta,
            self.model,
        )?)
    }

    fn is_exact(&self) -> bool {
        true
    }
}

/// A qualifying seed set with its bookkeeping.
#[derive(Clone, Debug)]
pub struct Solution {
    /// The selected prefix, in sequence order.
    pub seeds: Vec<NodeId>,
    /// Evaluated `Pr(coverage >= eta)` for the returned prefix; at least
    /// `prob_threshold + eps`.
    pub achieved_prob: f64,
    /// Simulation runs per evaluation (None for exact evaluation).
    pub estimator_runs: Option<u32>,
    /// The `eps` actually applied (forced to 0 under exact evaluation).
    pub eps: f64,
    pub method: SequenceMethod,
}

/// Return the shortest prefix of `sequence` whose evaluated coverage
/// probability reaches `prob_threshold + eps`.
///
/// `eps` compensates for estimator error and must lie in
/// `[0, (1 - P) / 2)`; exact evaluators force it to zero. `eta` must be
/// strictly below the target size unless the evaluator is exact. If no
/// prefix qualifies, the error reports the best probability observed.
pub fn min_seed_set(
    instance: &CoverageInstance<'_>,
    eps: f64,
    sequence: &SeedSequence,
    evaluator: &mut dyn ProbEvaluator,
    search: SearchMode,
) -> Result<Solution, SolveError> {
    let p = instance.prob_threshold();
    let eps = if evaluator.is_exact() { 0.0 } else { eps };
    if !(0.0..(1.0 - p) / 2.0).contains(&eps) {
        return Err(SolveError::EpsOutOfRange {
            eps,
            prob_threshold: p,
        });
    }
    if instance.is_full_coverage() && !evaluator.is_exact() {
        return Err(SolveError::FullCoverageEta);
    }
    let graph = instance.graph();
    graph.check_nodes(&sequence.order)?;
    let mut seen = vec![false; graph.node_count()];
    for v in &sequence.order {
        if seen[v.index()] {
            return Err(SolveError::BadSequence("duplicate node"));
        }
        seen[v.index()] = true;
    }

    let threshold = p + eps;
    let mut best_prob = 0.0;
    let mut best_len = 0;
    let mut last_eval = (0usize, 0.0f64);
    let found = prefix_search(sequence.len(), search, |i| {
        let prob = evaluator.coverage_prob(sequence.prefix(i + 1))?;
        last_eval = (i, prob);
        if prob > best_prob {
            best_prob = prob;
            best_len = i + 1;
        }
        Ok::<bool, SolveError>(prob >= threshold)
    })?;

    match found {
        Some(i) => {
            let achieved = if last_eval.0 == i {
                last_eval.1
            } else {
                evaluator.coverage_prob(sequence.prefix(i + 1))?
            };
            Ok(Solution {
                seeds: sequence.prefix(i + 1).to_vec(),
                achieved_prob: achieved,
                estimator_runs: evaluator.runs(),
                eps,
                method: sequence.method,
            })
        }
        None => {
            // under binary search, report the full sequence's probability as
            // the best achieved (the maximum, if the predicate is monotone)
            if search == SearchMode::Binary && !sequence.is_empty() {
                let prob = evaluator.coverage_prob(sequence.prefix(sequence.len()))?;
                if prob > best_prob {
                    best_prob = prob;
                    best_len = sequence.len();
                }
            }
            Err(SolveError::Infeasible {
                best_prob,
                best_len,
            })
        }
    }
}
