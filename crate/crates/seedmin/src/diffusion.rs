//! Independent cascade diffusion and reproducible random streams.
//!
//! Two simulator modes exist on purpose. The stepwise mode flips each edge
//! coin on demand, exactly mirroring the diffusion process. The
//! [`LiveEdgeTable`] mode flips every edge once up front and reduces a
//! cascade to reachability in the surviving subgraph; both modes draw
//! coverage from the same distribution, and the table mode additionally
//! couples outcomes across seed sets (reachable sets grow monotonically with
//! the seed set on a fixed table), which estimation and search code exploits.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{BipartiteGraph, GraphError, NodeId, ProbGraph};

/// Diffusion model for one-hop activation probabilities.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Model {
    /// Independent cascade: `p(S, v) = 1 - prod_{u in S} (1 - p_uv)`.
    Ic,
    /// Linear threshold: `p(S, v) = sum_{u in S} p_uv`, valid when the
    /// in-probabilities of every node sum to at most 1.
    Lt,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::Ic => write!(f, "ic"),
            Model::Lt => write!(f, "lt"),
        }
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Reproducible random stream: identical `(seed, stream)` pairs generate
/// identical bit sequences, and distinct stream indices are statistically
/// independent (they select different ChaCha streams under the same key).
///
/// [`RngStream::substream`] derives nested families, so work can be
/// partitioned across streams (one per simulation run, per worker, per sweep
/// point) and reassembled independent of execution order.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct RngStream {
    seed: u64,
    stream: u64,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        RngStream { seed, stream: 0 }
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        RngStream { seed, stream }
    }

    #[inline]
    pub fn seed(&self) -> u64 {
        self.seed
    }

    #[inline]
    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Child stream `index` of this stream. Children of one parent are
    /// pairwise distinct for any `index`.
    #[inline]
    pub fn substream(&self, index: u64) -> Self {
        RngStream {
            seed: self.seed,
            stream: splitmix64(self.stream).wrapping_add(index),
        }
    }

    /// Materialize the generator for this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DiffusionError {
    Graph(GraphError),
    /// Linear-threshold weights into a node sum beyond 1.
    InvalidLtWeights {
        node: u32,
        sum: f64,
    },
    /// The queried node is not on the right side of the bipartite graph.
    NotRightNode(u32),
    /// A seed is not on the left side of the bipartite graph.
    SeedNotLeft(u32),
}

impl fmt::Display for DiffusionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiffusionError::Graph(e) => write!(f, "{e}"),
            DiffusionError::InvalidLtWeights { node, sum } => {
                write!(f, "LT weights into node {node} sum to {sum} > 1")
            }
            DiffusionError::NotRightNode(v) => write!(f, "node {v} is not a target-side node"),
            DiffusionError::SeedNotLeft(v) => write!(f, "seed {v} is not a left-side node"),
        }
    }
}

impl core::error::Error for DiffusionError {}

impl From<GraphError> for DiffusionError {
    fn from(e: GraphError) -> Self {
        DiffusionError::Graph(e)
    }
}

/// Final state of one cascade.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CascadeOutcome {
    /// All active nodes, ascending. Always contains the seeds.
    pub active: Vec<NodeId>,
    /// Number of active nodes inside the target set.
    pub coverage: u32,
}

pub(crate) struct TargetMask {
    pub mask: Vec<bool>,
    pub count: usize,
}

impl TargetMask {
    pub(crate) fn build(graph: &ProbGraph, target: &[NodeId]) -> Result<Self, GraphError> {
        graph.check_nodes(target)?;
        let mut mask = vec![false; graph.node_count()];
        let mut count = 0;
        for &t in target {
            if !mask[t.index()] {
                mask[t.index()] = true;
                count += 1;
            }
        }
        Ok(TargetMask { mask, count })
    }
}

/// Run one independent cascade stepwise: every node activated at step `t - 1`
/// gets a single chance to activate each inactive out-neighbor at step `t`;
/// the process stops when a step activates nothing.
pub fn simulate_ic(
    graph: &ProbGraph,
    seeds: &[NodeId],
    target: &[NodeId],
    rng: &RngStream,
) -> Result<CascadeOutcome, DiffusionError> {
    graph.require_assigned()?;
    graph.check_nodes(seeds)?;
    let target = TargetMask::build(graph, target)?;
    let mut r = rng.rng();
    let mut active = vec![false; graph.node_count()];
    let coverage = run_cascade(graph, seeds, &target.mask, &mut active, &mut r);
    Ok(CascadeOutcome {
        active: collect_active(&active),
        coverage,
    })
}

/// Stepwise cascade over a preallocated `active` buffer (must be all-false on
/// entry). Returns the coverage count.
pub(crate) fn run_cascade<R: Rng>(
    graph: &ProbGraph,
    seeds: &[NodeId],
    target_mask: &[bool],
    active: &mut [bool],
    rng: &mut R,
) -> u32 {
    let mut coverage = 0u32;
    let mut frontier: Vec<NodeId> = Vec::new();
    for &s in seeds {
        if !active[s.index()] {
            active[s.index()] = true;
            if target_mask[s.index()] {
                coverage += 1;
            }
            frontier.push(s);
        }
    }
    let mut next = Vec::new();
    while !frontier.is_empty() {
        next.clear();
        for &u in &frontier {
            for e in graph.out_edges(u) {
                if active[e.target.index()] {
                    continue;
                }
                if e.prob >= 1.0 || (e.prob > 0.0 && rng.gen_bool(e.prob)) {
                    active[e.target.index()] = true;
                    if target_mask[e.target.index()] {
                        coverage += 1;
                    }
                    next.push(e.target);
                }
            }
        }
        core::mem::swap(&mut frontier, &mut next);
    }
    coverage
}

fn collect_active(active: &[bool]) -> Vec<NodeId> {
    active
        .iter()
        .enumerate()
        .filter(|(_, &a)| a)
        .map(|(i, _)| NodeId(i as u32))
        .collect()
}

/// A pre-drawn realization of every edge coin. Cascade coverage from any
/// seed set equals reachability in the surviving subgraph, so one table can
/// serve many seed sets with coupled outcomes.
#[derive(Clone, Debug)]
pub struct LiveEdgeTable {
    live: Vec<Vec<NodeId>>,
}

impl LiveEdgeTable {
    /// Flip every edge once (nodes in id order, out-edges in adjacency
    /// order), keeping those that come up live.
    pub fn sample(graph: &ProbGraph, rng: &RngStream) -> Result<Self, DiffusionError> {
        graph.require_assigned()?;
        let mut r = rng.rng();
        let mut live = Vec::with_capacity(graph.node_count());
        for u in graph.nodes() {
            let mut adj = Vec::new();
            for e in graph.out_edges(u) {
                if e.prob >= 1.0 || (e.prob > 0.0 && r.gen_bool(e.prob)) {
                    adj.push(e.target);
                }
            }
            live.push(adj);
        }
        Ok(LiveEdgeTable { live })
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.live.len()
    }

    /// Surviving out-neighbors of node `u`.
    #[inline]
    pub fn live_out(&self, u: usize) -> &[NodeId] {
        &self.live[u]
    }

    /// Nodes reachable from `seeds` along live edges, as a membership mask.
    pub fn reach_mask(&self, seeds: &[NodeId]) -> Vec<bool> {
        let mut active = vec![false; self.live.len()];
        self.extend_reach(seeds, &mut active);
        active
    }

    /// Grow an existing reach mask by additional seeds; used to walk a seed
    /// sequence incrementally. Nodes already marked are skipped.
    pub(crate) fn extend_reach(&self, seeds: &[NodeId], active: &mut [bool]) {
        let mut stack: Vec<NodeId> = Vec::new();
        for &s in seeds {
            if !active[s.index()] {
                active[s.index()] = true;
                stack.push(s);
            }
        }
        while let Some(u) = stack.pop() {
            for &v in &self.live[u.index()] {
                if !active[v.index()] {
                    active[v.index()] = true;
                    stack.push(v);
                }
            }
        }
    }

    /// Cascade outcome for `seeds` on this fixed table.
    pub fn simulate(
        &self,
        graph: &ProbGraph,
        seeds: &[NodeId],
        target: &[NodeId],
    ) -> Result<CascadeOutcome, DiffusionError> {
        graph.check_nodes(seeds)?;
        let target = TargetMask::build(graph, target)?;
        let active = self.reach_mask(seeds);
        let coverage = active
            .iter()
            .zip(target.mask.iter())
            .filter(|(&a, &t)| a && t)
            .count() as u32;
        Ok(CascadeOutcome {
            active: collect_active(&active),
            coverage,
        })
    }
}

/// Validate LT in-weights for every right node: each sum must stay within 1
/// (tiny tolerance for accumulated rounding).
pub(crate) fn validate_lt(bgraph: &BipartiteGraph) -> Result<(), DiffusionError> {
    for (pos, v) in bgraph.right().iter().enumerate() {
        let sum: f64 = bgraph.in_edges(pos).iter().map(|&(_, p)| p).sum();
        if sum > 1.0 + 1e-12 {
            return Err(DiffusionError::InvalidLtWeights { node: v.0, sum });
        }
    }
    Ok(())
}

/// Activation probability of right node `v` given seeds on the left, from a
/// seed membership mask over left positions.
#[inline]
pub(crate) fn activation_prob_masked(
    bgraph: &BipartiteGraph,
    seed_mask: &[bool],
    right_pos: usize,
    model: Model,
) -> f64 {
    match model {
        Model::Ic => {
            let mut miss = 1.0;
            for &(l, p) in bgraph.in_edges(right_pos) {
                if seed_mask[l] {
                    miss *= 1.0 - p;
                }
            }
            1.0 - miss
        }
        Model::Lt => bgraph
            .in_edges(right_pos)
            .iter()
            .filter(|&&(l, _)| seed_mask[l])
            .map(|&(_, p)| p)
            .sum(),
    }
}

/// Exact probability that `v` is activated by seed set `seeds` in one hop.
pub fn activation_prob_one_hop(
    bgraph: &BipartiteGraph,
    seeds: &[NodeId],
    v: NodeId,
    model: Model,
) -> Result<f64, DiffusionError> {
    let pos = bgraph
        .right_position(v)
        .ok_or(DiffusionError::NotRightNode(v.0))?;
    let mask = bgraph
        .left_mask(seeds)
        .map_err(|_| DiffusionError::SeedNotLeft(not_left(bgraph, seeds)))?;
    if model == Model::Lt {
        validate_lt(bgraph)?;
    }
    Ok(activation_prob_masked(bgraph, &mask, pos, model))
}

fn not_left(bgraph: &BipartiteGraph, seeds: &[NodeId]) -> u32 {
    seeds
        .iter()
        .find(|s| bgraph.left_position(**s).is_none())
        .map(|s| s.0)
        .unwrap_or(0)
}
