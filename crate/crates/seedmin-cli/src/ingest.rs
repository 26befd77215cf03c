//! Dataset ingestion: edge-list files, weighting schemes, and target sets.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use seedmin::{NodeId, ProbGraph};

use crate::config::Weighting;
use crate::CliError;

/// How to turn an edge-list file into a weighted graph.
#[derive(Debug, Clone)]
pub struct GraphSpec<'a> {
    pub path: &'a Path,
    pub weighting: Weighting,
    /// Treat each line as an undirected pair (two directed edges).
    pub undirected: bool,
    /// Reverse every edge before weighting (vote-style datasets record
    /// "u endorses v", while influence flows v -> u).
    pub reverse: bool,
    /// Optional per-node volume file (`label count` lines) for the
    /// collaboration weighting; defaults to the sum of incoming counts.
    pub volumes: Option<&'a Path>,
}

pub fn load_graph(spec: &GraphSpec<'_>) -> Result<ProbGraph, CliError> {
    let text = fs::read_to_string(spec.path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", spec.path.display())))?;
    load_graph_from_text(&text, spec)
}

pub fn load_graph_from_text(text: &str, spec: &GraphSpec<'_>) -> Result<ProbGraph, CliError> {
    let text = if spec.reverse {
        reverse_edge_lines(text)?
    } else {
        text.to_string()
    };
    match spec.weighting {
        Weighting::Given => parse(&text, spec.undirected),
        Weighting::WeightedCascade => {
            let mut g = parse(&text, spec.undirected)?;
            g.assign_weighted_cascade();
            Ok(g)
        }
        Weighting::Collaboration => collaboration_graph(&text, spec),
    }
}

fn parse(text: &str, undirected: bool) -> Result<ProbGraph, CliError> {
    ProbGraph::parse_edge_list(text, !undirected).map_err(|e| CliError::Parse(e.to_string()))
}

/// Swap the first two fields of every edge line, leaving comments, node
/// declarations, and probabilities alone.
fn reverse_edge_lines(text: &str) -> Result<String, CliError> {
    let mut out = String::with_capacity(text.len());
    for line in text.lines() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            out.push_str(line);
        } else {
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            match fields.len() {
                1 => out.push_str(trimmed),
                2 | 3 => {
                    out.push_str(fields[1]);
                    out.push(' ');
                    out.push_str(fields[0]);
                    if let Some(p) = fields.get(2) {
                        out.push(' ');
                        out.push_str(p);
                    }
                }
                _ => return Err(CliError::Parse(format!("malformed line {trimmed:?}"))),
            }
        }
        out.push('\n');
    }
    Ok(out)
}

/// Collaboration weighting: repeated `u v` lines count as interaction
/// multiplicity d(u, v); the per-node volume d(v) comes from the volumes
/// file or defaults to the total incoming multiplicity. The edge then gets
/// probability d(u, v) / d(v).
fn collaboration_graph(text: &str, spec: &GraphSpec<'_>) -> Result<ProbGraph, CliError> {
    let mut counts: BTreeMap<(String, String), u64> = BTreeMap::new();
    let mut declared: Vec<String> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.len() {
            1 => declared.push(fields[0].to_string()),
            2 => {
                let mut bump = |u: &str, v: &str| {
                    *counts.entry((u.to_string(), v.to_string())).or_insert(0) += 1;
                };
                bump(fields[0], fields[1]);
                if spec.undirected {
                    bump(fields[1], fields[0]);
                }
            }
            _ => {
                return Err(CliError::Parse(format!(
                    "line {}: collaboration weighting expects 'u v' lines, got {line:?}",
                    idx + 1
                )))
            }
        }
    }

    // structure text with duplicates collapsed, preserving first-appearance
    // order of labels from the original input
    let mut structure = String::new();
    for line in text.lines() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = t.split_whitespace().collect();
        if fields.len() == 1 {
            structure.push_str(fields[0]);
        } else {
            structure.push_str(fields[0]);
            structure.push(' ');
            structure.push_str(fields[1]);
        }
        structure.push('\n');
    }
    let mut graph = parse(&structure, spec.undirected)?;

    let volumes: BTreeMap<String, u64> = match spec.volumes {
        Some(path) => read_volumes(path)?,
        None => {
            let mut v: BTreeMap<String, u64> = BTreeMap::new();
            for ((_, to), c) in &counts {
                *v.entry(to.clone()).or_insert(0) += c;
            }
            v
        }
    };

    // re-key by dense id up front so the weighting closures stay cheap
    let mut id_counts: BTreeMap<(NodeId, NodeId), u64> = BTreeMap::new();
    for ((ul, vl), c) in &counts {
        if let (Some(u), Some(v)) = (graph.node_id(ul), graph.node_id(vl)) {
            id_counts.insert((u, v), *c);
        }
    }
    let id_volumes: Vec<u64> = graph
        .nodes()
        .map(|v| volumes.get(graph.label(v)).copied().unwrap_or(0))
        .collect();

    graph
        .assign_collaboration_weights(
            |u, v| id_counts.get(&(u, v)).copied().unwrap_or(0),
            |v| id_volumes[v.index()],
        )
        .map_err(|e| CliError::Parse(e.to_string()))?;
    Ok(graph)
}

fn read_volumes(path: &Path) -> Result<BTreeMap<String, u64>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(CliError::Parse(format!(
                "{}:{}: expected 'label count'",
                path.display(),
                idx + 1
            )));
        }
        let count: u64 = fields[1].parse().map_err(|_| {
            CliError::Parse(format!(
                "{}:{}: bad count {:?}",
                path.display(),
                idx + 1,
                fields[1]
            ))
        })?;
        map.insert(fields[0].to_string(), count);
    }
    Ok(map)
}

/// Target-set file: one node label per line, or the single token `ALL`
/// meaning every node in the graph.
pub fn load_target(
    graph: &ProbGraph,
    spec: &str,
    base: Option<&Path>,
) -> Result<Vec<NodeId>, CliError> {
    if spec == "ALL" {
        return Ok(graph.nodes().collect());
    }
    let path = match base {
        Some(b) => b.join(spec),
        None => spec.into(),
    };
    let text = fs::read_to_string(&path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    parse_node_list(graph, &text)
}

/// Node labels, one per line (or the token `ALL`), resolved against the
/// graph's label map.
pub fn parse_node_list(graph: &ProbGraph, text: &str) -> Result<Vec<NodeId>, CliError> {
    if text.trim() == "ALL" {
        return Ok(graph.nodes().collect());
    }
    let mut nodes = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let id = graph
            .node_id(line)
            .ok_or_else(|| CliError::Parse(format!("line {}: unknown node {line:?}", idx + 1)))?;
        nodes.push(id);
    }
    Ok(nodes)
}

/// Comma-separated node labels resolved against the graph.
pub fn parse_seed_list(graph: &ProbGraph, list: &str) -> Result<Vec<NodeId>, CliError> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|label| {
            graph
                .node_id(label)
                .ok_or_else(|| CliError::Parse(format!("unknown node {label:?}")))
        })
        .collect()
}
