//! `seedmin`: pick minimum seed sets that reach a coverage threshold with a
//! guaranteed probability under independent cascade diffusion.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use seedmin_cli::commands::{self, CommandOutput};
use seedmin_cli::config::{Method, RunConfig, RunFlags, Weighting};
use seedmin_cli::CliError;

#[derive(Parser)]
#[command(
    name = "seedmin",
    about = "Minimum seed sets with probabilistic influence-coverage guarantees",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic preferential-attachment graph.
    Gen(GenArgs),
    /// Solve one instance: smallest seed prefix with Pr(coverage >= eta) >= p + eps.
    Solve(RunFlags),
    /// Seed-set size as the coverage threshold varies.
    SweepEta(SweepArgs),
    /// Coverage probability as the seed set grows.
    PhaseTransition(PhaseArgs),
    /// Coverage mean/stddev for greedy prefixes vs random seed sets.
    Stats(StatsArgs),
    /// Exact coverage distribution on a one-way bipartite graph.
    ExactDp(DpArgs),
    /// Brute-force exact distribution (at most 25 edges).
    Oracle(OracleArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Number of nodes.
    #[arg(long)]
    nodes: usize,
    /// Attachments per joining node.
    #[arg(long, default_value_t = 3)]
    edges_per_node: usize,
    /// Generator seed.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Edge weighting of the emitted file.
    #[arg(long, value_enum, default_value = "weighted-cascade")]
    weighting: Weighting,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    run: RunFlags,
    /// Coverage thresholds to sweep.
    #[arg(long, value_delimiter = ',', required = true)]
    etas: Vec<u32>,
    /// Methods to compare (defaults to the configured method).
    #[arg(long, value_enum, value_delimiter = ',')]
    methods: Vec<Method>,
}

#[derive(Args)]
struct PhaseArgs {
    #[command(flatten)]
    run: RunFlags,
    /// Seed-set sizes to evaluate.
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    /// Methods to compare (defaults to the configured method).
    #[arg(long, value_enum, value_delimiter = ',')]
    methods: Vec<Method>,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    run: RunFlags,
    /// Seed-set sizes to profile.
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    /// Random seed sets per size.
    #[arg(long, default_value_t = 10)]
    random_sets: u32,
}

#[derive(Args)]
struct DpArgs {
    #[command(flatten)]
    run: RunFlags,
    /// Seed nodes as comma-separated labels.
    #[arg(long, required = true)]
    seeds: String,
    /// Also report Pr(coverage >= eta).
    #[arg(long)]
    tail_eta: Option<u32>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    run: RunFlags,
    /// Seed nodes as comma-separated labels.
    #[arg(long, required = true)]
    seeds: String,
}

/// exact-dp and oracle don't take eta; give the resolver a placeholder.
fn resolve_lenient(flags: &RunFlags) -> Result<RunConfig, CliError> {
    let mut flags = flags.clone();
    if flags.eta.is_none() {
        flags.eta = Some(1);
    }
    RunConfig::resolve(&flags)
}

fn emit(out: Option<&PathBuf>, output: CommandOutput) -> Result<(), CliError> {
    for note in &output.notes {
        eprintln!("{note}");
    }
    match out {
        Some(path) => fs::write(path, output.csv)
            .map_err(|e| CliError::Internal(format!("{}: {e}", path.display()))),
        None => {
            print!("{}", output.csv);
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gen(args) => {
            let output =
                commands::cmd_gen(args.nodes, args.edges_per_node, args.seed, args.weighting)?;
            emit(args.out.as_ref(), output)
        }
        Command::Solve(flags) => {
            let cfg = RunConfig::resolve(&flags)?;
            let output = commands::cmd_solve(&cfg)?;
            emit(cfg.out.as_ref(), output)
        }
        Command::SweepEta(args) => {
            let cfg = RunConfig::resolve(&args.run)?;
            let methods = if args.methods.is_empty() {
                vec![cfg.method]
            } else {
                args.methods
            };
            let output = commands::cmd_sweep_eta(&cfg, &args.etas, &methods)?;
            emit(cfg.out.as_ref(), output)
        }
        Command::PhaseTransition(args) => {
            let cfg = RunConfig::resolve(&args.run)?;
            let methods = if args.methods.is_empty() {
                vec![cfg.method]
            } else {
                args.methods
            };
            let output = commands::cmd_phase_transition(&cfg, &args.sizes, &methods)?;
            emit(cfg.out.as_ref(), output)
        }
        Command::Stats(args) => {
            let cfg = RunConfig::resolve(&args.run)?;
            let output = commands::cmd_stats(&cfg, &args.sizes, args.random_sets)?;
            emit(cfg.out.as_ref(), output)
        }
        Command::ExactDp(args) => {
            let cfg = resolve_lenient(&args.run)?;
            let output = commands::cmd_exact_dp(&cfg, &args.seeds, args.tail_eta)?;
            emit(cfg.out.as_ref(), output)
        }
        Command::Oracle(args) => {
            let cfg = resolve_lenient(&args.run)?;
            let output = commands::cmd_oracle(&cfg, &args.seeds)?;
            emit(cfg.out.as_ref(), output)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
