//! `liar-arena`: play single games, compute exact values, run sweeps and
//! check the closed-form bounds.
//!
//! Exit codes: 0 success, 1 bound or verification failure, 2 invalid
//! configuration or I/O error.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use liar_arena::bounds::{bound_table, identity_audit};
use liar_arena::exact::{within_guard, ExactSolver};
use liar_arena::harness::{
    exact_table, play, sweep, verify_adversary, verify_exact, AdversaryBase, AdversarySpec,
    SolverName, SweepConfig,
};
use liar_arena::{ComparisonGraph, GameConfig, GameKind};

const THREADS_ENV: &str = "LIAR_ARENA_THREADS";

#[derive(Parser)]
#[command(name = "liar-arena", version, about = "Comparison search games with up to k lies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one game and print its result as JSON.
    Play(PlayArgs),
    /// Exact minimax value of a tiny game.
    Exact(ExactArgs),
    /// Run a grid of games and write one row per game.
    Sweep(SweepArgs),
    /// Print the closed-form bounds.
    Bounds(BoundsArgs),
    /// Check exact values or adversary games against the bounds.
    VerifyBounds(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum OnOff {
    On,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct PlayArgs {
    #[arg(long)]
    solver: SolverName,
    #[arg(long)]
    adversary: AdversaryBase,
    #[arg(long, value_enum, default_value = "off")]
    claim1: OnOff,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    kind: GameKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Defaults to 10 (k + 1) n.
    #[arg(long)]
    query_cap: Option<usize>,
    /// Write the final comparison graph as a `winner>loser xMult` edge list.
    #[arg(long, value_name = "PATH")]
    dump_graph: Option<PathBuf>,
    /// Write the transcript as `a b winner` lines.
    #[arg(long, value_name = "PATH")]
    dump_transcript: Option<PathBuf>,
}

#[derive(Args)]
struct ExactArgs {
    #[arg(long, required_unless_present = "table")]
    n: Option<usize>,
    #[arg(long, required_unless_present = "table")]
    k: Option<usize>,
    #[arg(long, required_unless_present = "table")]
    kind: Option<GameKind>,
    /// Emit `n,k,kind,value` for every in-guard point of the grid.
    #[arg(long, conflicts_with_all = ["n", "k", "kind"])]
    table: bool,
    #[arg(long, default_value_t = 4)]
    n_max: usize,
    #[arg(long, default_value_t = 1)]
    k_max: usize,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 2)]
    n_min: usize,
    #[arg(long)]
    n_max: usize,
    #[arg(long, default_value_t = 0)]
    k_min: usize,
    #[arg(long)]
    k_max: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    solvers: Vec<SolverName>,
    /// Adversary names, optionally suffixed with `+claim1`.
    #[arg(long, value_delimiter = ',', required = true)]
    adversaries: Vec<AdversarySpec>,
    #[arg(long)]
    kind: GameKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, required = true)]
    table: bool,
    #[arg(long, default_value_t = 10)]
    n_max: u64,
    #[arg(long, default_value_t = 3)]
    k_max: u64,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, conflicts_with = "adversary", required_unless_present = "adversary")]
    exact: bool,
    #[arg(long)]
    adversary: bool,
    #[arg(long)]
    kind: GameKind,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    k_max: Option<usize>,
    /// Check a single budget instead of 0..=k-max.
    #[arg(long, conflicts_with = "k_max")]
    k: Option<usize>,
    /// Seeded random-solver runs per grid point (adversary mode).
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// A failure carrying its exit code.
struct Failure(u8, anyhow::Error);

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure(2, e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    let outcome = match cli.command {
        Command::Play(args) => cmd_play(args),
        Command::Exact(args) => cmd_exact(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Bounds(args) => cmd_bounds(args),
        Command::VerifyBounds(args) => cmd_verify_bounds(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(raw) = std::env::var(THREADS_ENV) {
        let threads: usize = raw
            .parse()
            .with_context(|| format!("{THREADS_ENV} must be a positive integer, got `{raw}`"))?;
        if threads == 0 {
            bail!("{THREADS_ENV} must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("building the worker pool")?;
    }
    Ok(())
}

fn cmd_play(args: PlayArgs) -> Result<u8, Failure> {
    let spec = AdversarySpec::new(args.adversary, matches!(args.claim1, OnOff::On));
    let mut config = GameConfig::new(args.n, args.k, args.kind);
    config.query_cap = args.query_cap;
    let result = play(args.solver, spec, config, args.seed).map_err(anyhow::Error::from)?;
    let json = serde_json::to_string(&result.record()).context("serialising result")?;
    println!("{json}");
    if let Some(path) = args.dump_graph {
        let graph = ComparisonGraph::from_transcript(&result.transcript);
        fs::write(&path, graph.to_string())
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = args.dump_transcript {
        fs::write(&path, result.transcript.dump())
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(if result.verified { 0 } else { 1 })
}

fn cmd_exact(args: ExactArgs) -> Result<u8, Failure> {
    if args.table {
        let kinds = [GameKind::Max, GameKind::MaxMin];
        let entries = exact_table(&kinds, args.n_max, 0..=args.k_max)
            .map_err(|e| Failure(1, e.into()))?;
        let mut out = csv::Writer::from_writer(std::io::stdout());
        out.write_record(["n", "k", "kind", "value"])
            .context("writing CSV")?;
        for e in entries {
            out.write_record([
                e.n.to_string(),
                e.k.to_string(),
                e.kind.to_string(),
                e.value.to_string(),
            ])
            .context("writing CSV")?;
        }
        out.flush().context("writing CSV")?;
        return Ok(0);
    }
    let (n, k, kind) = match (args.n, args.k, args.kind) {
        (Some(n), Some(k), Some(kind)) => (n, k, kind),
        _ => return Err(anyhow::anyhow!("--n, --k and --kind are required").into()),
    };
    if !within_guard(n, k) {
        return Err(anyhow::anyhow!("n = {n}, k = {k} is outside the exact-solver guard").into());
    }
    let value = ExactSolver::new(n, k, kind)
        .and_then(|s| s.parallel(true).game_value())
        .map_err(|e| Failure(1, e.into()))?;
    println!("{value}");
    Ok(0)
}

fn cmd_sweep(args: SweepArgs) -> Result<u8, Failure> {
    let cfg = SweepConfig {
        n_range: args.n_min..=args.n_max,
        k_range: args.k_min..=args.k_max,
        solvers: args.solvers,
        adversaries: args.adversaries,
        kind: args.kind,
        seed: args.seed,
    };
    let rows = sweep(&cfg).map_err(anyhow::Error::from)?;
    let bytes = match args.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in &rows {
                w.serialize(row).context("encoding CSV")?;
            }
            w.into_inner().context("encoding CSV")?
        }
        Format::Json => {
            let mut v = serde_json::to_vec_pretty(&rows).context("encoding JSON")?;
            v.push(b'\n');
            v
        }
    };
    fs::write(&args.output, bytes).with_context(|| format!("writing {}", args.output.display()))?;
    Ok(0)
}

fn cmd_bounds(args: BoundsArgs) -> Result<u8, Failure> {
    let mut out = csv::Writer::from_writer(std::io::stdout());
    out.write_record(["n", "k", "pohl", "rgl_max", "thm1_lower", "identity_ok"])
        .context("writing CSV")?;
    for row in bound_table(args.n_max, args.k_max) {
        out.write_record([
            row.n.to_string(),
            row.k.to_string(),
            row.pohl.to_string(),
            row.rgl_max.to_string(),
            row.thm1_lower.to_string(),
            row.identity_ok.to_string(),
        ])
        .context("writing CSV")?;
    }
    out.flush().context("writing CSV")?;
    let audit = identity_audit(2..=args.n_max, args.k_max);
    for (n, k, lower, alt) in &audit.false_points {
        eprintln!("identity fails at n={n} k={k}: {lower} vs {alt}");
    }
    Ok(0)
}

fn cmd_verify_bounds(args: VerifyArgs) -> Result<u8, Failure> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let k_range = match (args.k, args.k_max) {
        (Some(k), _) => k..=k,
        (None, Some(k_max)) => 0..=k_max,
        (None, None) => 0..=if args.exact { 1 } else { 2 },
    };
    let violations = if args.exact {
        let n_max = args.n_max.unwrap_or(4);
        let report = verify_exact(args.kind, 2..=n_max, k_range)
            .map_err(|e| Failure(1, e.into()))?;
        for e in &report.entries {
            writeln!(out, "exact n={} k={} kind={} value={}", e.n, e.k, e.kind, e.value)
                .context("writing report")?;
        }
        for (n, k) in &report.skipped {
            writeln!(out, "skipped n={n} k={k} (outside exact-solver guard)")
                .context("writing report")?;
        }
        report.violations
    } else {
        let n_max = args.n_max.unwrap_or(6);
        let report = verify_adversary(args.kind, 2..=n_max, k_range, args.trials, args.seed)
            .map_err(anyhow::Error::from)?;
        for ((n, k), min) in &report.min_verified {
            writeln!(out, "adversary n={n} k={k} kind={} fewest_verified={min}", args.kind)
                .context("writing report")?;
        }
        writeln!(
            out,
            "games={} unfinished={} violations={}",
            report.games,
            report.unfinished,
            report.violations.len()
        )
        .context("writing report")?;
        report.violations
    };
    for v in &violations {
        writeln!(out, "VIOLATION {v}").context("writing report")?;
    }
    Ok(if violations.is_empty() { 0 } else { 1 })
}
