//! The experiment commands. Each returns its CSV as a string plus optional
//! stderr notes; the binary handles file output and exit codes.
//!
//! Randomness is budgeted from one root stream per run so outputs are
//! byte-identical for identical configurations: substream 1 feeds sequence
//! generation (per method), substream 2 probability evaluation (per method,
//! per sweep point), substreams 3 and 4 the statistics command. Sweep
//! points draw from their own substreams, so running them on several
//! threads cannot change any result.

use std::fmt::Write as _;
use std::time::Instant;

use seedmin::bipartite::{self, DpTable};
use seedmin::diffusion::Model;
use seedmin::estimate::{brute_force_distribution, coverage_stats};
use seedmin::graph::GraphError;
use seedmin::solve::{
    self, baseline_high_degree, baseline_pagerank, baseline_random, greedy_sequence,
    greedy_sequence_bipartite, min_seed_set, ExactBipartiteEvaluator, GreedyConfig, McEvaluator,
    SeedSequence, SolveError,
};
use seedmin::{BipartiteGraph, CoverageInstance, NodeId, ProbGraph, RngStream};

use crate::config::{EvaluatorKind, Method, RunConfig, Weighting};
use crate::ingest::{self, GraphSpec};
use crate::{fmt_prob, CliError};

const STREAM_SEQUENCE: u64 = 1;
const STREAM_EVAL: u64 = 2;
const STREAM_STATS_GREEDY: u64 = 3;
const STREAM_STATS_RANDOM: u64 = 4;

fn method_index(m: Method) -> u64 {
    match m {
        Method::Greedy => 0,
        Method::Random => 1,
        Method::HighDegree => 2,
        Method::Pagerank => 3,
    }
}

pub struct CommandOutput {
    pub csv: String,
    pub notes: Vec<String>,
}

/// Graph plus resolved target set for one run.
pub struct LoadedRun {
    pub graph: ProbGraph,
    pub target: Vec<NodeId>,
}

pub fn load_run(cfg: &RunConfig) -> Result<LoadedRun, CliError> {
    let spec = GraphSpec {
        path: &cfg.graph,
        weighting: cfg.weighting,
        undirected: cfg.undirected,
        reverse: cfg.reverse,
        volumes: cfg.volumes.as_deref(),
    };
    let graph = ingest::load_graph(&spec)?;
    let target = ingest::load_target(&graph, &cfg.target, None)?;
    Ok(LoadedRun { graph, target })
}

type PreparedRun = (ProbGraph, Option<BipartiteGraph>, Vec<NodeId>, Vec<String>);

/// Graph, optional bipartite view, target, and any ingestion notes for one
/// run. Under the exact evaluator, `--target ALL` narrows to the right
/// side: left nodes cannot be activated, and the exact machinery scores
/// only target-side activations.
fn prepare(cfg: &RunConfig) -> Result<PreparedRun, CliError> {
    let run = load_run(cfg)?;
    let LoadedRun { graph, mut target } = run;
    let mut notes = Vec::new();
    if graph.self_loops_dropped() > 0 {
        notes.push(format!(
            "dropped {} self-loop(s) during parsing",
            graph.self_loops_dropped()
        ));
    }
    let bgraph = bipartite_view(cfg, &graph)?;
    if let Some(b) = &bgraph {
        if cfg.target == "ALL" && target.len() != b.right().len() {
            notes.push(format!(
                "exact evaluation counts coverage over the {} target-side nodes; \
                 narrowing ALL to the right side",
                b.right().len()
            ));
            target = b.right().to_vec();
        }
    }
    Ok((graph, bgraph, target, notes))
}

fn map_graph_err(e: GraphError) -> CliError {
    match e {
        GraphError::InvalidInstance(v) => CliError::Config(v),
        other => CliError::Parse(other.to_string()),
    }
}

fn map_solve_err(e: SolveError) -> CliError {
    match e {
        SolveError::Infeasible {
            best_prob,
            best_len,
        } => CliError::Infeasible(format!(
            "no qualifying prefix; best probability {} at {} seeds",
            fmt_prob(best_prob),
            best_len
        )),
        SolveError::EpsOutOfRange { .. }
        | SolveError::FullCoverageEta
        | SolveError::BadConfig(_)
        | SolveError::TargetMismatch
        | SolveError::BadSequence(_) => CliError::Config(vec![e.to_string()]),
        other => CliError::Parse(other.to_string()),
    }
}

/// Bipartite view when the exact evaluator is requested.
fn bipartite_view(cfg: &RunConfig, graph: &ProbGraph) -> Result<Option<BipartiteGraph>, CliError> {
    match cfg.evaluator {
        EvaluatorKind::MonteCarlo => Ok(None),
        EvaluatorKind::ExactBipartite => graph.as_bipartite().map(Some).map_err(|e| {
            CliError::Config(vec![format!(
                "exact evaluation needs a one-way bipartite graph: {e}"
            )])
        }),
    }
}

fn build_sequence(
    cfg: &RunConfig,
    graph: &ProbGraph,
    bgraph: Option<&BipartiteGraph>,
    target: &[NodeId],
    method: Method,
    root: &RngStream,
) -> Result<SeedSequence, CliError> {
    let seq_rng = root
        .substream(STREAM_SEQUENCE)
        .substream(method_index(method));
    let seq = match method {
        Method::Greedy => match bgraph {
            Some(b) => {
                greedy_sequence_bipartite(b, cfg.model.into(), None).map_err(map_solve_err)?
            }
            None => {
                let gc = GreedyConfig {
                    samples_per_eval: cfg.samples_per_eval,
                    eta: cfg.eta,
                    stop_inflation: 1.0,
                    lazy: true,
                    stop_at_target: false,
                };
                greedy_sequence(graph, target, &gc, &seq_rng).map_err(map_solve_err)?
            }
        },
        Method::Random => baseline_random(graph, &seq_rng),
        Method::HighDegree => baseline_high_degree(graph),
        Method::Pagerank => {
            baseline_pagerank(graph, cfg.restart, cfg.l1_tol).map_err(map_solve_err)?
        }
    };
    // the exact path seeds only left-side nodes: target-side nodes cannot
    // activate anything, so baselines drop them from their ranking
    let seq = match bgraph {
        Some(b) => {
            let mut order = Vec::new();
            let mut gains = Vec::new();
            for (v, g) in seq.order.iter().zip(seq.gains.iter()) {
                if b.left_position(*v).is_some() {
                    order.push(*v);
                    gains.push(*g);
                }
            }
            SeedSequence {
                order,
                gains,
                method: seq.method,
                stop_index: seq.stop_index,
            }
        }
        None => seq,
    };
    Ok(seq)
}

/// One full solve for a given method and eta, returning the solution.
#[allow(clippy::too_many_arguments)]
fn solve_point(
    cfg: &RunConfig,
    graph: &ProbGraph,
    bgraph: Option<&BipartiteGraph>,
    target: &[NodeId],
    sequence: &SeedSequence,
    eta: u32,
    method: Method,
    point: u64,
    root: &RngStream,
) -> Result<solve::Solution, CliError> {
    let instance =
        CoverageInstance::new(graph, target.to_vec(), eta, cfg.p).map_err(map_graph_err)?;
    let eval_rng = root
        .substream(STREAM_EVAL)
        .substream(method_index(method))
        .substream(point);
    match bgraph {
        Some(b) => {
            let mut eval = ExactBipartiteEvaluator::for_instance(b, &instance, cfg.model.into())
                .map_err(map_solve_err)?;
            min_seed_set(&instance, cfg.eps, sequence, &mut eval, cfg.search.into())
                .map_err(map_solve_err)
        }
        None => {
            let mut eval =
                McEvaluator::new(graph, target, eta, cfg.runs, eval_rng).map_err(map_solve_err)?;
            min_seed_set(&instance, cfg.eps, sequence, &mut eval, cfg.search.into())
                .map_err(map_solve_err)
        }
    }
}

/// Solve one instance end to end and emit a single CSV record.
pub fn cmd_solve(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let started = Instant::now();
    let (graph, bgraph, target, notes) = prepare(cfg)?;
    let root = RngStream::new(cfg.seed);
    let sequence = build_sequence(cfg, &graph, bgraph.as_ref(), &target, cfg.method, &root)?;
    let solution = solve_point(
        cfg,
        &graph,
        bgraph.as_ref(),
        &target,
        &sequence,
        cfg.eta,
        cfg.method,
        0,
        &root,
    )?;

    let seeds = solution
        .seeds
        .iter()
        .map(|&v| graph.label(v))
        .collect::<Vec<_>>()
        .join(" ");
    let mut csv = String::new();
    if cfg.timing {
        csv.push_str("method,seed_count,achieved_prob,seeds,wall_ms\n");
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            cfg.method.name(),
            solution.seeds.len(),
            fmt_prob(solution.achieved_prob),
            seeds,
            started.elapsed().as_millis()
        );
    } else {
        csv.push_str("method,seed_count,achieved_prob,seeds\n");
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            cfg.method.name(),
            solution.seeds.len(),
            fmt_prob(solution.achieved_prob),
            seeds
        );
    }
    Ok(CommandOutput { csv, notes })
}

/// Chunked deterministic parallel map: results keep item order no matter
/// how many threads run.
fn parallel_map<T, R, F>(jobs: usize, items: Vec<T>, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    if jobs <= 1 || items.len() <= 1 {
        return items.iter().map(&f).collect();
    }
    let n = items.len();
    let chunk = n.div_ceil(jobs);
    let mut out: Vec<Option<R>> = (0..n).map(|_| None).collect();
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for (c, slot) in items.chunks(chunk).zip(out.chunks_mut(chunk)) {
            let f = &f;
            handles.push(scope.spawn(move || {
                for (item, s) in c.iter().zip(slot.iter_mut()) {
                    *s = Some(f(item));
                }
            }));
        }
        for h in handles {
            h.join().expect("sweep worker panicked");
        }
    });
    out.into_iter()
        .map(|r| r.expect("all slots filled"))
        .collect()
}

/// One solve per `(eta, method)`; rows sorted by eta then method order.
pub fn cmd_sweep_eta(
    cfg: &RunConfig,
    etas: &[u32],
    methods: &[Method],
) -> Result<CommandOutput, CliError> {
    let (graph, bgraph, target, notes) = prepare(cfg)?;
    let root = RngStream::new(cfg.seed);

    let mut sequences = Vec::new();
    for &m in methods {
        sequences.push(build_sequence(
            cfg,
            &graph,
            bgraph.as_ref(),
            &target,
            m,
            &root,
        )?);
    }

    let mut points = Vec::new();
    for &eta in etas {
        for (mi, &m) in methods.iter().enumerate() {
            points.push((eta, mi, m));
        }
    }
    let results = parallel_map(cfg.jobs, points, |&(eta, mi, m)| {
        solve_point(
            cfg,
            &graph,
            bgraph.as_ref(),
            &target,
            &sequences[mi],
            eta,
            m,
            u64::from(eta),
            &root,
        )
        .map(|sol| (eta, m, sol.seeds.len()))
    });

    let mut csv = String::from("eta,method,seed_count\n");
    for r in results {
        let (eta, m, count) = r?;
        let _ = writeln!(csv, "{eta},{},{count}", m.name());
    }
    Ok(CommandOutput { csv, notes })
}

/// Coverage probability at each prefix size of each method's sequence.
pub fn cmd_phase_transition(
    cfg: &RunConfig,
    sizes: &[usize],
    methods: &[Method],
) -> Result<CommandOutput, CliError> {
    let (graph, bgraph, target, notes) = prepare(cfg)?;
    let root = RngStream::new(cfg.seed);
    let n = graph.node_count();
    if let Some(&bad) = sizes.iter().find(|&&s| s > n) {
        return Err(CliError::Config(vec![format!(
            "prefix size {bad} exceeds the {n} nodes in the graph"
        )]));
    }

    let mut sequences = Vec::new();
    for &m in methods {
        sequences.push(build_sequence(
            cfg,
            &graph,
            bgraph.as_ref(),
            &target,
            m,
            &root,
        )?);
    }

    let mut points = Vec::new();
    for &size in sizes {
        for (mi, &m) in methods.iter().enumerate() {
            points.push((size, mi, m));
        }
    }
    let results = parallel_map(cfg.jobs, points, |&(size, mi, m)| -> Result<_, CliError> {
        let seq = &sequences[mi];
        let size = size.min(seq.len());
        let prefix = seq.prefix(size);
        let prob = match bgraph.as_ref() {
            Some(b) => bipartite::coverage_prob(b, prefix, cfg.eta, cfg.model.into())
                .map_err(|e| map_solve_err(e.into()))?,
            None => {
                let eval_rng = root
                    .substream(STREAM_EVAL)
                    .substream(method_index(m))
                    .substream(size as u64);
                let mut eval = McEvaluator::new(&graph, &target, cfg.eta, cfg.runs, eval_rng)
                    .map_err(map_solve_err)?;
                use seedmin::solve::ProbEvaluator;
                eval.coverage_prob(prefix).map_err(map_solve_err)?
            }
        };
        Ok((size, m, prob))
    });

    let mut csv = String::from("size,method,prob\n");
    for r in results {
        let (size, m, prob) = r?;
        let _ = writeln!(csv, "{size},{},{}", m.name(), fmt_prob(prob));
    }
    Ok(CommandOutput { csv, notes })
}

/// Coverage mean and standard deviation of greedy prefixes vs the worst of
/// `random_sets` random seed sets per size.
pub fn cmd_stats(
    cfg: &RunConfig,
    sizes: &[usize],
    random_sets: u32,
) -> Result<CommandOutput, CliError> {
    if random_sets == 0 {
        return Err(CliError::Config(vec![
            "--random-sets must be at least 1".to_string()
        ]));
    }
    let (graph, bgraph, target, notes) = prepare(cfg)?;
    let root = RngStream::new(cfg.seed);
    let n = graph.node_count();
    if let Some(&bad) = sizes.iter().find(|&&s| s > n) {
        return Err(CliError::Config(vec![format!(
            "seed set size {bad} exceeds the {n} nodes in the graph"
        )]));
    }

    let greedy = build_sequence(cfg, &graph, bgraph.as_ref(), &target, Method::Greedy, &root)?;

    let points: Vec<usize> = sizes.to_vec();
    let results = parallel_map(cfg.jobs, points, |&size| -> Result<_, CliError> {
        let size_idx = size as u64;
        let gstats = coverage_stats(
            &graph,
            &target,
            greedy.prefix(size.min(greedy.len())),
            cfg.runs,
            &root.substream(STREAM_STATS_GREEDY).substream(size_idx),
        )
        .map_err(|e| CliError::Parse(e.to_string()))?;

        let mut worst: Option<seedmin::estimate::CoverageStats> = None;
        for j in 0..random_sets {
            use rand::Rng;
            let set_rng = root
                .substream(STREAM_STATS_RANDOM)
                .substream(size_idx)
                .substream(u64::from(j));
            // uniform k-subset: partial Fisher-Yates
            let mut nodes: Vec<NodeId> = graph.nodes().collect();
            let mut r = set_rng.rng();
            for i in 0..size.min(n.saturating_sub(1)) {
                let j = r.gen_range(i..n);
                nodes.swap(i, j);
            }
            nodes.truncate(size);
            let stats = coverage_stats(&graph, &target, &nodes, cfg.runs, &set_rng.substream(1))
                .map_err(|e| CliError::Parse(e.to_string()))?;
            if worst.as_ref().is_none_or(|w| stats.stddev > w.stddev) {
                worst = Some(stats);
            }
        }
        Ok((size, gstats, worst.expect("random_sets >= 1")))
    });

    let mut csv = String::from("size,which,mean,stddev\n");
    for r in results {
        let (size, g, w) = r?;
        let _ = writeln!(
            csv,
            "{size},greedy,{},{}",
            fmt_prob(g.mean),
            fmt_prob(g.stddev)
        );
        let _ = writeln!(
            csv,
            "{size},random-max,{},{}",
            fmt_prob(w.mean),
            fmt_prob(w.stddev)
        );
    }
    Ok(CommandOutput { csv, notes })
}

/// Exact coverage distribution (and optional tail) for a fixed seed set on
/// a one-way bipartite graph.
pub fn cmd_exact_dp(
    cfg: &RunConfig,
    seeds_arg: &str,
    eta: Option<u32>,
) -> Result<CommandOutput, CliError> {
    let run = load_run(cfg)?;
    let b = run.graph.as_bipartite().map_err(|e| {
        CliError::Config(vec![format!(
            "exact-dp needs a one-way bipartite graph: {e}"
        )])
    })?;
    let seeds = ingest::parse_seed_list(&run.graph, seeds_arg)?;
    let model: Model = cfg.model.into();
    let table = DpTable::build(&b, &seeds, model).map_err(|e| map_solve_err(e.into()))?;
    let mut csv = String::from("coverage,prob\n");
    for (j, p) in table.distribution().iter().enumerate() {
        let _ = writeln!(csv, "{j},{}", fmt_prob(*p));
    }
    let mut notes = Vec::new();
    if let Some(eta) = eta {
        if eta as usize > table.m() {
            return Err(CliError::Config(vec![format!(
                "eta {eta} exceeds the {} target nodes",
                table.m()
            )]));
        }
        notes.push(format!(
            "Pr(coverage >= {eta}) = {}",
            fmt_prob(table.tail(eta))
        ));
    }
    Ok(CommandOutput { csv, notes })
}

/// Brute-force exact distribution over all live-edge configurations.
pub fn cmd_oracle(cfg: &RunConfig, seeds_arg: &str) -> Result<CommandOutput, CliError> {
    let run = load_run(cfg)?;
    let seeds = ingest::parse_seed_list(&run.graph, seeds_arg)?;
    let dist = brute_force_distribution(&run.graph, &run.target, &seeds)
        .map_err(|e| CliError::Config(vec![e.to_string()]))?;
    let mut csv = String::from("coverage,prob\n");
    for (j, p) in dist.probs().iter().enumerate() {
        let _ = writeln!(csv, "{j},{}", fmt_prob(*p));
    }
    Ok(CommandOutput {
        csv,
        notes: Vec::new(),
    })
}

/// Generate a synthetic graph and return its edge-list text.
pub fn cmd_gen(
    nodes: usize,
    edges_per_node: usize,
    seed: u64,
    weighting: Weighting,
) -> Result<CommandOutput, CliError> {
    if nodes == 0 {
        return Err(CliError::Config(vec![
            "--nodes must be positive".to_string()
        ]));
    }
    let graph = match weighting {
        Weighting::WeightedCascade => {
            crate::gen::weighted_cascade_graph(nodes, edges_per_node, seed)
        }
        Weighting::Given => crate::gen::preferential_attachment(nodes, edges_per_node, seed),
        Weighting::Collaboration => {
            return Err(CliError::Config(vec![
                "gen supports weighted-cascade or given (structure-only) output".to_string(),
            ]))
        }
    };
    Ok(CommandOutput {
        csv: graph.to_edge_list(),
        notes: Vec::new(),
    })
}
