//! Synthetic graph generation for desk-scale experiments.

use rand::Rng;
use seedmin::{ProbGraph, RngStream};

/// Directed preferential-attachment graph, fully determined by
/// `(n, edges_per_node, seed)`.
///
/// Node `u` joins with up to `edges_per_node` attachments to earlier nodes
/// chosen proportionally to degree + 1; each attachment is oriented by a
/// fair coin so influence can flow both toward and away from hubs. The
/// result is a structure-only graph; apply a weighting pass before
/// simulating.
#[allow(clippy::needless_range_loop)] // t walks candidate targets by index
pub fn preferential_attachment(n: usize, edges_per_node: usize, seed: u64) -> ProbGraph {
    let mut rng = RngStream::new(seed).rng();
    let mut degree = vec![0u64; n];
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for u in 1..n {
        let k = edges_per_node.min(u);
        let mut picked: Vec<usize> = Vec::with_capacity(k);
        for _ in 0..k {
            let total: u64 = (0..u)
                .filter(|t| !picked.contains(t))
                .map(|t| degree[t] + 1)
                .sum();
            let mut roll = rng.gen_range(0..total);
            let mut choice = usize::MAX;
            for t in 0..u {
                if picked.contains(&t) {
                    continue;
                }
                let w = degree[t] + 1;
                if roll < w {
                    choice = t;
                    break;
                }
                roll -= w;
            }
            picked.push(choice);
            degree[choice] += 1;
            degree[u] += 1;
            if rng.gen_bool(0.5) {
                edges.push((u as u32, choice as u32));
            } else {
                edges.push((choice as u32, u as u32));
            }
        }
    }
    ProbGraph::from_structure(n, edges).expect("generated edges are in range")
}

/// Preferential-attachment graph with weighted-cascade probabilities.
pub fn weighted_cascade_graph(n: usize, edges_per_node: usize, seed: u64) -> ProbGraph {
    let mut g = preferential_attachment(n, edges_per_node, seed);
    g.assign_weighted_cascade();
    g
}
