//! Probability-weighted directed graphs and their ingestion.
//!
//! Node labels from input files are remapped to dense integer ids so that
//! adjacency can live in flat arrays; the label map is retained for output.
//! Edge probabilities may be left unassigned by the input (an explicit NaN
//! sentinel) until a weighting pass such as [`ProbGraph::assign_weighted_cascade`]
//! fills them in. Every algorithm that consumes probabilities rejects graphs
//! that still contain unassigned edges.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Dense node index in `[0, n)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Outgoing edge of a [`ProbGraph`].
#[derive(Clone, Copy, Debug)]
pub struct Edge {
    pub target: NodeId,
    /// Activation probability in `[0, 1]`, or NaN while unassigned.
    pub prob: f64,
}

impl Edge {
    #[inline]
    pub fn is_assigned(&self) -> bool {
        !self.prob.is_nan()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    /// Line could not be split into `u v [p]` fields.
    ParseLine { line: usize, text: String },
    /// Probability field outside `[0, 1]` (or not a number).
    ProbRange { line: usize, field: String },
    /// Duplicate edges where one carries a probability and another does not.
    MixedAssignment { source: String, target: String },
    /// Collaboration weighting saw `multiplicity > volume` or `volume == 0`.
    InvalidWeight { source: String, target: String },
    /// A node has both incoming and outgoing edges, so no one-way split exists.
    NotBipartite { node: String },
    /// The operation needs assigned probabilities on every edge.
    UnassignedProbability,
    /// A referenced node id is outside `[0, n)`.
    NodeOutOfRange { id: u32, n: usize },
    /// Instance parameter violations, all collected at once.
    InvalidInstance(Vec<String>),
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::ParseLine { line, text } => {
                write!(f, "line {line}: malformed edge line {text:?}")
            }
            GraphError::ProbRange { line, field } => {
                write!(f, "line {line}: probability {field:?} not in [0, 1]")
            }
            GraphError::MixedAssignment { source, target } => write!(
                f,
                "duplicate edge {source} -> {target} mixes assigned and unassigned probabilities"
            ),
            GraphError::InvalidWeight { source, target } => {
                write!(
                    f,
                    "invalid collaboration weight on edge {source} -> {target}"
                )
            }
            GraphError::NotBipartite { node } => {
                write!(
                    f,
                    "node {node} has both in- and out-edges; graph is not one-way bipartite"
                )
            }
            GraphError::UnassignedProbability => {
                write!(f, "graph contains unassigned edge probabilities")
            }
            GraphError::NodeOutOfRange { id, n } => {
                write!(f, "node id {id} out of range for graph with {n} nodes")
            }
            GraphError::InvalidInstance(errs) => {
                write!(f, "invalid instance: {}", errs.join("; "))
            }
        }
    }
}

impl core::error::Error for GraphError {}

/// Merge state of a (source, target) pair while the graph is being built.
#[derive(Clone, Copy)]
enum ProbState {
    Unassigned,
    Assigned(f64),
}

impl ProbState {
    /// Noisy-or merge: several independent influence chances combine as
    /// `1 - prod(1 - p_i)`. Unassigned duplicates collapse into one.
    fn merge(self, other: ProbState) -> Result<ProbState, ()> {
        match (self, other) {
            (ProbState::Unassigned, ProbState::Unassigned) => Ok(ProbState::Unassigned),
            (ProbState::Assigned(a), ProbState::Assigned(b)) => {
                Ok(ProbState::Assigned(1.0 - (1.0 - a) * (1.0 - b)))
            }
            _ => Err(()),
        }
    }
}

/// Directed graph with per-edge activation probabilities.
///
/// Immutable once weighting is done; all simulation and estimation routines
/// take `&ProbGraph` and may run concurrently.
#[derive(Clone, Debug)]
pub struct ProbGraph {
    labels: Vec<String>,
    ids: BTreeMap<String, NodeId>,
    out: Vec<Vec<Edge>>,
    in_deg: Vec<u32>,
    edge_count: usize,
    unassigned: usize,
    self_loops_dropped: usize,
}

impl PartialEq for ProbGraph {
    fn eq(&self, other: &Self) -> bool {
        if self.labels != other.labels || self.out.len() != other.out.len() {
            return false;
        }
        self.out.iter().zip(other.out.iter()).all(|(a, b)| {
            a.len() == b.len()
                && a.iter()
                    .zip(b.iter())
                    .all(|(x, y)| x.target == y.target && x.prob.to_bits() == y.prob.to_bits())
        })
    }
}

impl ProbGraph {
    /// Parse a whitespace-separated edge list.
    ///
    /// Each non-comment line is `u v p` (probability in `[0, 1]`), `u v`
    /// (probability left unassigned for a later weighting pass), or a bare
    /// `u` declaring an isolated node. Lines whose first non-blank character
    /// is `#` are ignored. With `directed == false` every edge line yields
    /// both orientations. Self-loops are dropped (counted in
    /// [`ProbGraph::self_loops_dropped`]); duplicate pairs are merged by
    /// noisy-or.
    pub fn parse_edge_list(text: &str, directed: bool) -> Result<ProbGraph, GraphError> {
        let mut builder = Builder::default();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split_whitespace();
            let u = fields.next().expect("non-empty line has a field");
            let v = match fields.next() {
                Some(v) => v,
                None => {
                    builder.node(u);
                    continue;
                }
            };
            let state = match fields.next() {
                None => ProbState::Unassigned,
                Some(p) => {
                    let prob: f64 = p.parse().map_err(|_| GraphError::ProbRange {
                        line: line_no,
                        field: p.to_string(),
                    })?;
                    if !(0.0..=1.0).contains(&prob) {
                        return Err(GraphError::ProbRange {
                            line: line_no,
                            field: p.to_string(),
                        });
                    }
                    ProbState::Assigned(prob)
                }
            };
            if fields.next().is_some() {
                return Err(GraphError::ParseLine {
                    line: line_no,
                    text: raw.to_string(),
                });
            }
            builder.edge(u, v, state)?;
            if !directed {
                builder.edge(v, u, state)?;
            }
        }
        Ok(builder.finish())
    }

    /// Build a graph over `n` nodes (labelled by their decimal index) from
    /// explicit edge triples. Duplicates merge by noisy-or, self-loops drop.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<ProbGraph, GraphError>
    where
        I: IntoIterator<Item = (u32, u32, f64)>,
    {
        let mut builder = Builder::default();
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        for l in &labels {
            builder.node(l);
        }
        for (u, v, p) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(GraphError::NodeOutOfRange { id: u.max(v), n });
            }
            if !(0.0..=1.0).contains(&p) {
                return Err(GraphError::ProbRange {
                    line: 0,
                    field: alloc::format!("{p}"),
                });
            }
            builder.edge(
                &labels[u as usize],
                &labels[v as usize],
                ProbState::Assigned(p),
            )?;
        }
        Ok(builder.finish())
    }

    /// Like [`ProbGraph::from_edges`] but leaves every probability unassigned.
    pub fn from_structure<I>(n: usize, edges: I) -> Result<ProbGraph, GraphError>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let mut builder = Builder::default();
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        for l in &labels {
            builder.node(l);
        }
        for (u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(GraphError::NodeOutOfRange { id: u.max(v), n });
            }
            builder.edge(
                &labels[u as usize],
                &labels[v as usize],
                ProbState::Unassigned,
            )?;
        }
        Ok(builder.finish())
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.out.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn out_edges(&self, v: NodeId) -> &[Edge] {
        &self.out[v.index()]
    }

    #[inline]
    pub fn out_degree(&self, v: NodeId) -> usize {
        self.out[v.index()].len()
    }

    #[inline]
    pub fn in_degree(&self, v: NodeId) -> u32 {
        self.in_deg[v.index()]
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.out.len() as u32).map(NodeId)
    }

    /// All edges as `(source, target, prob)` triples, source-major order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, f64)> + '_ {
        self.out.iter().enumerate().flat_map(|(u, adj)| {
            adj.iter()
                .map(move |e| (NodeId(u as u32), e.target, e.prob))
        })
    }

    #[inline]
    pub fn has_unassigned(&self) -> bool {
        self.unassigned > 0
    }

    #[inline]
    pub fn self_loops_dropped(&self) -> usize {
        self.self_loops_dropped
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v.index()]
    }

    pub fn node_id(&self, label: &str) -> Option<NodeId> {
        self.ids.get(label).copied()
    }

    pub(crate) fn check_node(&self, v: NodeId) -> Result<(), GraphError> {
        if v.index() < self.node_count() {
            Ok(())
        } else {
            Err(GraphError::NodeOutOfRange {
                id: v.0,
                n: self.node_count(),
            })
        }
    }

    pub(crate) fn check_nodes(&self, vs: &[NodeId]) -> Result<(), GraphError> {
        vs.iter().try_for_each(|&v| self.check_node(v))
    }

    pub(crate) fn require_assigned(&self) -> Result<(), GraphError> {
        if self.has_unassigned() {
            Err(GraphError::UnassignedProbability)
        } else {
            Ok(())
        }
    }

    /// Weighted cascade: every edge into `v` gets probability `1 / d_in(v)`.
    /// Overwrites any previously assigned probabilities.
    pub fn assign_weighted_cascade(&mut self) {
        for adj in &mut self.out {
            for e in adj.iter_mut() {
                e.prob = 1.0 / f64::from(self.in_deg[e.target.index()]);
            }
        }
        self.unassigned = 0;
    }

    /// Collaboration weighting: `prob(u, v) = multiplicity(u, v) / volume(v)`.
    ///
    /// `multiplicity` is a per-edge interaction count (e.g. papers coauthored
    /// over that edge) and `volume` a per-node total; the ratio must land in
    /// `[0, 1]` and `volume(v)` must be positive wherever `v` has an in-edge.
    pub fn assign_collaboration_weights<M, V>(
        &mut self,
        multiplicity: M,
        volume: V,
    ) -> Result<(), GraphError>
    where
        M: Fn(NodeId, NodeId) -> u64,
        V: Fn(NodeId) -> u64,
    {
        for u in 0..self.out.len() {
            for i in 0..self.out[u].len() {
                let v = self.out[u][i].target;
                let m = multiplicity(NodeId(u as u32), v);
                let d = volume(v);
                if d == 0 || m > d {
                    return Err(GraphError::InvalidWeight {
                        source: self.labels[u].clone(),
                        target: self.labels[v.index()].clone(),
                    });
                }
                self.out[u][i].prob = m as f64 / d as f64;
            }
        }
        self.unassigned = 0;
        Ok(())
    }

    /// Split the node set into `(V1, V2)` with every edge crossing from V1 to
    /// V2. V1 collects nodes with out-edges plus isolated nodes, V2 nodes
    /// with in-edges; any node with both kinds of edges makes the split
    /// impossible. All probabilities must be assigned.
    pub fn as_bipartite(&self) -> Result<BipartiteGraph, GraphError> {
        self.require_assigned()?;
        let n = self.node_count();
        let mut left = Vec::new();
        let mut right = Vec::new();
        for v in 0..n {
            let has_out = !self.out[v].is_empty();
            let has_in = self.in_deg[v] > 0;
            match (has_out, has_in) {
                (true, true) => {
                    return Err(GraphError::NotBipartite {
                        node: self.labels[v].clone(),
                    })
                }
                (_, true) => right.push(NodeId(v as u32)),
                _ => left.push(NodeId(v as u32)),
            }
        }
        let mut left_pos = vec![usize::MAX; n];
        let mut right_pos = vec![usize::MAX; n];
        for (i, v) in left.iter().enumerate() {
            left_pos[v.index()] = i;
        }
        for (i, v) in right.iter().enumerate() {
            right_pos[v.index()] = i;
        }
        let mut out_edges = vec![Vec::new(); left.len()];
        let mut in_edges = vec![Vec::new(); right.len()];
        for (u, v, p) in self.edges() {
            let ul = left_pos[u.index()];
            let vr = right_pos[v.index()];
            out_edges[ul].push((vr, p));
            in_edges[vr].push((ul, p));
        }
        Ok(BipartiteGraph {
            left,
            right,
            left_pos,
            right_pos,
            out_edges,
            in_edges,
        })
    }

    /// Serialize back to edge-list text: one declaration line per node (in id
    /// order, which pins the label-to-id mapping on re-parse), then one line
    /// per edge. Probabilities print in shortest round-trip form, so parsing
    /// the output reproduces the graph bit-for-bit.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        for l in &self.labels {
            s.push_str(l);
            s.push('\n');
        }
        for (u, v, p) in self.edges() {
            s.push_str(&self.labels[u.index()]);
            s.push(' ');
            s.push_str(&self.labels[v.index()]);
            if !p.is_nan() {
                s.push(' ');
                s.push_str(&alloc::format!("{p}"));
            }
            s.push('\n');
        }
        s
    }
}

#[derive(Default)]
struct Builder {
    labels: Vec<String>,
    ids: BTreeMap<String, NodeId>,
    edges: Vec<BTreeMap<NodeId, ProbState>>,
    self_loops: usize,
}

impl Builder {
    fn node(&mut self, label: &str) -> NodeId {
        if let Some(&id) = self.ids.get(label) {
            return id;
        }
        let id = NodeId(self.labels.len() as u32);
        self.labels.push(label.to_string());
        self.ids.insert(label.to_string(), id);
        self.edges.push(BTreeMap::new());
        id
    }

    fn edge(&mut self, u: &str, v: &str, state: ProbState) -> Result<(), GraphError> {
        let ui = self.node(u);
        let vi = self.node(v);
        if ui == vi {
            self.self_loops += 1;
            return Ok(());
        }
        match self.edges[ui.index()].get(&vi) {
            None => {
                self.edges[ui.index()].insert(vi, state);
            }
            Some(&existing) => {
                let merged = existing
                    .merge(state)
                    .map_err(|_| GraphError::MixedAssignment {
                        source: u.to_string(),
                        target: v.to_string(),
                    })?;
                self.edges[ui.index()].insert(vi, merged);
            }
        }
        Ok(())
    }

    fn finish(self) -> ProbGraph {
        let n = self.labels.len();
        let mut out = Vec::with_capacity(n);
        let mut in_deg = vec![0u32; n];
        let mut edge_count = 0;
        let mut unassigned = 0;
        for adj in self.edges {
            let mut list = Vec::with_capacity(adj.len());
            for (target, state) in adj {
                let prob = match state {
                    ProbState::Unassigned => {
                        unassigned += 1;
                        f64::NAN
                    }
                    ProbState::Assigned(p) => p,
                };
                in_deg[target.index()] += 1;
                edge_count += 1;
                list.push(Edge { target, prob });
            }
            out.push(list);
        }
        ProbGraph {
            labels: self.labels,
            ids: self.ids,
            out,
            in_deg,
            edge_count,
            unassigned,
            self_loops_dropped: self.self_loops,
        }
    }
}

/// One-way bipartite view: every edge runs from a left node to a right node.
///
/// Right-node activations are mutually independent under one-hop diffusion,
/// which is what makes exact coverage distributions tractable. The right
/// nodes, in ascending original id, are the implicit target set.
#[derive(Clone, Debug)]
pub struct BipartiteGraph {
    left: Vec<NodeId>,
    right: Vec<NodeId>,
    left_pos: Vec<usize>,
    right_pos: Vec<usize>,
    /// Per left position: `(right position, prob)`.
    out_edges: Vec<Vec<(usize, f64)>>,
    /// Per right position: `(left position, prob)`.
    in_edges: Vec<Vec<(usize, f64)>>,
}

impl BipartiteGraph {
    /// Build a bipartite graph directly: left nodes get ids `0..left_count`,
    /// right nodes `left_count..left_count + right_count`, and every edge is
    /// `(left index, right index, prob)`.
    pub fn new(
        left_count: usize,
        right_count: usize,
        edges: &[(u32, u32, f64)],
    ) -> Result<BipartiteGraph, GraphError> {
        let n = left_count + right_count;
        let left: Vec<NodeId> = (0..left_count as u32).map(NodeId).collect();
        let right: Vec<NodeId> = (left_count as u32..n as u32).map(NodeId).collect();
        let mut left_pos = vec![usize::MAX; n];
        let mut right_pos = vec![usize::MAX; n];
        for (i, v) in left.iter().enumerate() {
            left_pos[v.index()] = i;
        }
        for (i, v) in right.iter().enumerate() {
            right_pos[v.index()] = i;
        }
        let mut out_edges = vec![Vec::new(); left_count];
        let mut in_edges = vec![Vec::new(); right_count];
        for &(l, r, p) in edges {
            if l as usize >= left_count || r as usize >= right_count {
                return Err(GraphError::NodeOutOfRange { id: l.max(r), n });
            }
            if !(0.0..=1.0).contains(&p) {
                return Err(GraphError::ProbRange {
                    line: 0,
                    field: alloc::format!("{p}"),
                });
            }
            out_edges[l as usize].push((r as usize, p));
            in_edges[r as usize].push((l as usize, p));
        }
        Ok(BipartiteGraph {
            left,
            right,
            left_pos,
            right_pos,
            out_edges,
            in_edges,
        })
    }

    #[inline]
    pub fn left(&self) -> &[NodeId] {
        &self.left
    }

    #[inline]
    pub fn right(&self) -> &[NodeId] {
        &self.right
    }

    /// Number of right (target) nodes, `m`.
    #[inline]
    pub fn m(&self) -> usize {
        self.right.len()
    }

    /// Total node count across both sides.
    #[inline]
    pub fn node_count(&self) -> usize {
        self.left.len() + self.right.len()
    }

    #[inline]
    pub fn left_position(&self, v: NodeId) -> Option<usize> {
        self.left_pos
            .get(v.index())
            .copied()
            .filter(|&p| p != usize::MAX)
    }

    #[inline]
    pub fn right_position(&self, v: NodeId) -> Option<usize> {
        self.right_pos
            .get(v.index())
            .copied()
            .filter(|&p| p != usize::MAX)
    }

    #[inline]
    pub fn in_edges(&self, right_pos: usize) -> &[(usize, f64)] {
        &self.in_edges[right_pos]
    }

    #[inline]
    pub fn out_edges(&self, left_pos: usize) -> &[(usize, f64)] {
        &self.out_edges[left_pos]
    }

    /// Smallest edge probability, if there is any edge.
    pub fn min_edge_prob(&self) -> Option<f64> {
        self.in_edges
            .iter()
            .flatten()
            .map(|&(_, p)| p)
            .fold(None, |acc, p| Some(acc.map_or(p, |a: f64| a.min(p))))
    }

    /// Membership mask over left positions for a seed set given in original
    /// node ids. Errors if any seed is not a left node.
    pub(crate) fn left_mask(&self, seeds: &[NodeId]) -> Result<Vec<bool>, GraphError> {
        let mut mask = vec![false; self.left.len()];
        for &s in seeds {
            match self.left_position(s) {
                Some(p) => mask[p] = true,
                None => {
                    return Err(GraphError::NodeOutOfRange {
                        id: s.0,
                        n: self.left.len(),
                    })
                }
            }
        }
        Ok(mask)
    }
}

/// A full problem instance: graph, target set, coverage threshold `eta`, and
/// probability threshold in `(0, 1)`.
///
/// `eta == |target|` is admitted only so the bipartite full-coverage solver
/// can consume the instance; the general prefix solver insists on
/// `eta < |target|`.
#[derive(Clone, Debug)]
pub struct CoverageInstance<'a> {
    graph: &'a ProbGraph,
    target: Vec<NodeId>,
    eta: u32,
    prob_threshold: f64,
}

impl<'a> CoverageInstance<'a> {
    pub fn new(
        graph: &'a ProbGraph,
        mut target: Vec<NodeId>,
        eta: u32,
        prob_threshold: f64,
    ) -> Result<Self, GraphError> {
        target.sort_unstable();
        target.dedup();
        let mut violations = Vec::new();
        if let Some(v) = target.iter().find(|v| v.index() >= graph.node_count()) {
            violations.push(alloc::format!("target node {} outside graph", v.0));
        }
        if eta == 0 {
            violations.push("eta must be positive".to_string());
        }
        if eta as usize > target.len() {
            violations.push(alloc::format!(
                "eta = {eta} exceeds target size {}",
                target.len()
            ));
        }
        if !(prob_threshold > 0.0 && prob_threshold < 1.0) {
            violations.push(alloc::format!(
                "probability threshold {prob_threshold} not in (0, 1)"
            ));
        }
        if violations.is_empty() {
            Ok(CoverageInstance {
                graph,
                target,
                eta,
                prob_threshold,
            })
        } else {
            Err(GraphError::InvalidInstance(violations))
        }
    }

    #[inline]
    pub fn graph(&self) -> &'a ProbGraph {
        self.graph
    }

    #[inline]
    pub fn target(&self) -> &[NodeId] {
        &self.target
    }

    #[inline]
    pub fn eta(&self) -> u32 {
        self.eta
    }

    #[inline]
    pub fn prob_threshold(&self) -> f64 {
        self.prob_threshold
    }

    /// True when `eta` demands every target node.
    #[inline]
    pub fn is_full_coverage(&self) -> bool {
        self.eta as usize == self.target.len()
    }
}
