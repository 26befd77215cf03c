//! Binary-level behavior: exit codes, environment overrides, and fixed-seed
//! regression fixtures captured once from this implementation.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use seedmin_cli::commands::{cmd_solve, cmd_sweep_eta};
use seedmin_cli::config::{EvaluatorKind, Method, RunConfig, RunFlags, SearchKind, Weighting};
use seedmin_cli::gen::weighted_cascade_graph;
use seedmin_cli::ingest::{load_graph_from_text, GraphSpec};

const BIN: &str = env!("CARGO_BIN_EXE_seedmin");

const BIPARTITE_FIXTURE: &str = "\
a w 0.9
a x 0.6
b x 0.8
b y 0.7
c y 0.5
c z 0.85
a z 0.3
";

struct Fixture {
    dir: PathBuf,
}

impl Fixture {
    fn new(tag: &str) -> Fixture {
        let dir = std::env::temp_dir().join(format!("seedmin-cli-{tag}-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        Fixture { dir }
    }

    fn write(&self, name: &str, contents: &str) -> PathBuf {
        let path = self.dir.join(name);
        fs::write(&path, contents).unwrap();
        path
    }

    fn synthetic_graph(&self) -> PathBuf {
        self.write(
            "g120.txt",
            &weighted_cascade_graph(120, 3, 77).to_edge_list(),
        )
    }
}

impl Drop for Fixture {
    fn drop(&mut self) {
        fs::remove_dir_all(&self.dir).ok();
    }
}

fn run_bin(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(BIN).args(args).output().expect("binary runs");
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap_or(-1),
    )
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_regression_greedy_beats_random_at_fixed_seed() {
    let fx = Fixture::new("solve");
    let graph = fx.synthetic_graph();
    let base = [
        "solve",
        "--graph",
        path_str(&graph),
        "--target",
        "ALL",
        "--eta",
        "30",
        "--p",
        "0.5",
        "--eps",
        "0.01",
        "--runs",
        "400",
        "--seed",
        "5",
        "--samples-per-eval",
        "60",
    ];

    let mut greedy = base.to_vec();
    greedy.extend(["--method", "greedy"]);
    let (stdout, _, code) = run_bin(&greedy);
    assert_eq!(code, 0);
    // captured once from this implementation at the pinned seed
    assert_eq!(
        stdout,
        "method,seed_count,achieved_prob,seeds\ngreedy,2,0.600000,104 4\n"
    );

    let mut random = base.to_vec();
    random.extend(["--method", "random"]);
    let (stdout_r, _, code) = run_bin(&random);
    assert_eq!(code, 0);
    assert_eq!(
        stdout_r,
        "method,seed_count,achieved_prob,seeds\nrandom,8,0.595000,15 61 106 14 92 27 37 105\n"
    );

    let greedy_count: usize = stdout
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    let random_count: usize = stdout_r
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!(greedy_count <= random_count);
}

#[test]
fn sweep_eta_regression_is_monotone_under_exact_evaluation() {
    let fx = Fixture::new("sweep");
    let graph = fx.write("bip.txt", BIPARTITE_FIXTURE);
    let (stdout, _, code) = run_bin(&[
        "sweep-eta",
        "--graph",
        path_str(&graph),
        "--target",
        "ALL",
        "--eta",
        "1",
        "--etas",
        "1,2,3,4",
        "--methods",
        "greedy,high-degree",
        "--p",
        "0.6",
        "--evaluator",
        "exact-bipartite",
        "--seed",
        "5",
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        stdout,
        "eta,method,seed_count\n\
         1,greedy,1\n1,high_degree,1\n\
         2,greedy,1\n2,high_degree,1\n\
         3,greedy,2\n3,high_degree,2\n\
         4,greedy,3\n4,high_degree,3\n"
    );
    // seed counts never shrink as eta grows, per method
    for method in ["greedy", "high_degree"] {
        let counts: Vec<usize> = stdout
            .lines()
            .skip(1)
            .filter(|l| l.contains(method))
            .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
            .collect();
        assert!(
            counts.windows(2).all(|w| w[0] <= w[1]),
            "{method}: {counts:?}"
        );
    }
}

#[test]
fn phase_transition_regression_probabilities_rise_with_size() {
    let fx = Fixture::new("phase");
    let graph = fx.write("bip.txt", BIPARTITE_FIXTURE);
    let (stdout, _, code) = run_bin(&[
        "phase-transition",
        "--graph",
        path_str(&graph),
        "--target",
        "ALL",
        "--eta",
        "2",
        "--sizes",
        "1,2,3",
        "--methods",
        "greedy,random",
        "--p",
        "0.6",
        "--evaluator",
        "exact-bipartite",
        "--seed",
        "5",
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        stdout,
        "size,method,prob\n\
         1,greedy,0.666000\n1,random,0.666000\n\
         2,greedy,0.955850\n2,random,0.955850\n\
         3,greedy,0.995503\n3,random,0.995503\n"
    );
    for method in ["greedy", "random"] {
        let probs: Vec<f64> = stdout
            .lines()
            .skip(1)
            .filter(|l| l.contains(method))
            .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
            .collect();
        assert!(probs.iter().all(|p| (0.0..=1.0).contains(p)));
        assert!(
            probs.windows(2).all(|w| w[0] <= w[1]),
            "{method}: {probs:?}"
        );
    }
}

#[test]
fn stats_regression_and_concentration_scale() {
    let fx = Fixture::new("stats");
    let graph = fx.synthetic_graph();
    let (stdout, _, code) = run_bin(&[
        "stats",
        "--graph",
        path_str(&graph),
        "--target",
        "ALL",
        "--eta",
        "30",
        "--p",
        "0.5",
        "--sizes",
        "2,5,120",
        "--random-sets",
        "5",
        "--runs",
        "400",
        "--seed",
        "5",
        "--samples-per-eval",
        "60",
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        stdout,
        "size,which,mean,stddev\n\
         2,greedy,34.757500,14.983322\n\
         2,random-max,19.927500,14.236183\n\
         5,greedy,56.157500,11.591099\n\
         5,random-max,26.037500,15.747255\n\
         120,greedy,120.000000,0.000000\n\
         120,random-max,120.000000,0.000000\n"
    );
    // with every node seeded the coverage is deterministic
    assert!(stdout.contains("120,greedy,120.000000,0.000000"));
    // coverage spread stays at the square-root-of-n scale (constant captured
    // once at this seed: observed max 15.75 on 120 nodes, ratio 1.44)
    let n_sqrt = (120.0f64).sqrt();
    for line in stdout.lines().skip(1) {
        let stddev: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(stddev >= 0.0);
        assert!(stddev / n_sqrt < 1.6, "{line}");
    }
}

#[test]
fn exact_dp_regression_distribution() {
    let fx = Fixture::new("dp");
    let graph = fx.write("bip.txt", BIPARTITE_FIXTURE);
    let (stdout, stderr, code) = run_bin(&[
        "exact-dp",
        "--graph",
        path_str(&graph),
        "--seeds",
        "a,b",
        "--tail-eta",
        "3",
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        stdout,
        "coverage,prob\n0,0.001680\n1,0.039080\n2,0.270680\n3,0.514680\n4,0.173880\n"
    );
    assert!(stderr.contains("Pr(coverage >= 3) = 0.688560"));
}

#[test]
fn exit_codes_distinguish_failure_classes() {
    let fx = Fixture::new("codes");

    // 2: config violations (no graph, bad p) reported together
    let (_, stderr, code) = run_bin(&["solve", "--eta", "3", "--p", "1.7"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("--graph is required"));
    assert!(stderr.contains("must lie in (0, 1)"));

    // 3: unparseable input
    let bad = fx.write("bad.txt", "a b 1.5\n");
    let (_, stderr, code) = run_bin(&[
        "solve",
        "--graph",
        path_str(&bad),
        "--target",
        "ALL",
        "--eta",
        "1",
        "--p",
        "0.5",
    ]);
    assert_eq!(code, 3);
    assert!(stderr.contains("not in [0, 1]"));

    // 4: infeasible guarantee
    let weak = fx.write("weak.txt", "a v 0.2\nb v 0.2\n");
    let (_, stderr, code) = run_bin(&[
        "solve",
        "--graph",
        path_str(&weak),
        "--target",
        "ALL",
        "--eta",
        "1",
        "--p",
        "0.9",
        "--evaluator",
        "exact-bipartite",
        "--method",
        "high-degree",
    ]);
    assert_eq!(code, 4);
    assert!(stderr.contains("best probability"));

    // 0: a feasible run
    let (stdout, _, code) = run_bin(&[
        "solve",
        "--graph",
        path_str(&weak),
        "--target",
        "ALL",
        "--eta",
        "1",
        "--p",
        "0.3",
        "--evaluator",
        "exact-bipartite",
        "--method",
        "high-degree",
    ]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("method,seed_count"));
}

#[test]
fn seed_env_var_overrides_flag() {
    let fx = Fixture::new("env");
    let graph = fx.synthetic_graph();
    let args = [
        "solve",
        "--graph",
        path_str(&graph),
        "--target",
        "ALL",
        "--eta",
        "30",
        "--p",
        "0.5",
        "--runs",
        "200",
        "--method",
        "random",
        "--seed",
        "9999",
    ];
    let with_env = Command::new(BIN)
        .args(args)
        .env("SEEDMIN_SEED", "5")
        .output()
        .unwrap();
    let explicit = {
        let mut a = args.to_vec();
        let i = a.iter().position(|s| *s == "9999").unwrap();
        a[i] = "5";
        Command::new(BIN).args(&a).output().unwrap()
    };
    assert_eq!(with_env.stdout, explicit.stdout);
    // and both differ from the un-overridden seed
    let plain = Command::new(BIN).args(args).output().unwrap();
    assert_ne!(with_env.stdout, plain.stdout);
}

#[test]
fn jobs_env_var_does_not_change_results() {
    let fx = Fixture::new("jobs");
    let graph = fx.write("bip.txt", BIPARTITE_FIXTURE);
    let args = [
        "sweep-eta",
        "--graph",
        path_str(&graph),
        "--target",
        "ALL",
        "--eta",
        "1",
        "--etas",
        "1,2,3,4",
        "--methods",
        "greedy,high-degree",
        "--p",
        "0.6",
        "--evaluator",
        "exact-bipartite",
        "--seed",
        "5",
    ];
    let serial = Command::new(BIN).args(args).output().unwrap();
    let parallel = Command::new(BIN)
        .args(args)
        .env("SEEDMIN_JOBS", "4")
        .output()
        .unwrap();
    assert_eq!(serial.stdout, parallel.stdout);
}

#[test]
fn identical_invocations_emit_identical_bytes() {
    let fx = Fixture::new("repeat");
    let graph = fx.synthetic_graph();
    let args = [
        "solve",
        "--graph",
        path_str(&graph),
        "--target",
        "ALL",
        "--eta",
        "25",
        "--p",
        "0.5",
        "--runs",
        "300",
        "--seed",
        "3",
        "--method",
        "greedy",
        "--samples-per-eval",
        "50",
    ];
    let a = Command::new(BIN).args(args).output().unwrap();
    let b = Command::new(BIN).args(args).output().unwrap();
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn collaboration_weighting_from_repeated_lines() {
    // three papers between a and v, one between b and v; volumes give v ten
    // publications
    let text = "a v\na v\na v\nb v\n";
    let fx = Fixture::new("collab");
    let volumes = fx.write("volumes.txt", "v 10\na 4\nb 2\n");
    let spec = GraphSpec {
        path: Path::new("unused"),
        weighting: Weighting::Collaboration,
        undirected: false,
        reverse: false,
        volumes: Some(&volumes),
    };
    let graph = load_graph_from_text(text, &spec).unwrap();
    let edges: Vec<(String, String, f64)> = graph
        .edges()
        .map(|(u, v, p)| (graph.label(u).to_string(), graph.label(v).to_string(), p))
        .collect();
    assert_eq!(edges.len(), 2);
    assert_eq!(edges[0], ("a".to_string(), "v".to_string(), 0.3));
    assert_eq!(edges[1], ("b".to_string(), "v".to_string(), 0.1));

    // without a volumes file, volumes default to total incoming counts
    let spec = GraphSpec {
        volumes: None,
        ..spec
    };
    let graph = load_graph_from_text(text, &spec).unwrap();
    let probs: Vec<f64> = graph.edges().map(|(_, _, p)| p).collect();
    assert_eq!(probs, vec![0.75, 0.25]);
}

#[test]
fn empty_eta_list_yields_header_only_csv() {
    let fx = Fixture::new("empty");
    let graph = fx.write("bip.txt", BIPARTITE_FIXTURE);
    let cfg = RunConfig::resolve(&RunFlags {
        graph: Some(graph),
        target: Some("ALL".to_string()),
        eta: Some(1),
        p: Some(0.6),
        evaluator: Some(EvaluatorKind::ExactBipartite),
        search: Some(SearchKind::Linear),
        seed: Some(5),
        ..RunFlags::default()
    })
    .unwrap();
    let out = cmd_sweep_eta(&cfg, &[], &[Method::Greedy]).unwrap();
    assert_eq!(out.csv, "eta,method,seed_count\n");
}

#[test]
fn timing_column_is_opt_in() {
    let fx = Fixture::new("timing");
    let graph = fx.write("bip.txt", BIPARTITE_FIXTURE);
    let mut flags = RunFlags {
        graph: Some(graph),
        target: Some("ALL".to_string()),
        eta: Some(2),
        p: Some(0.6),
        evaluator: Some(EvaluatorKind::ExactBipartite),
        seed: Some(5),
        ..RunFlags::default()
    };
    let cfg = RunConfig::resolve(&flags).unwrap();
    let out = cmd_solve(&cfg).unwrap();
    assert!(!out.csv.contains("wall_ms"));

    flags.timing = true;
    let cfg = RunConfig::resolve(&flags).unwrap();
    let out = cmd_solve(&cfg).unwrap();
    assert!(out
        .csv
        .starts_with("method,seed_count,achieved_prob,seeds,wall_ms"));
}
