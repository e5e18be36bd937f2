//! Command-line surface for the ring-network simulator: outcome tables,
//! parameter sweeps, polygon studies, basis dumps, and the built-in check
//! suite, emitted as deterministic CSV or JSON.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or config error,
//! 3 resource limit.

mod commands;
mod config;
mod error;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::FigureName;
use config::{OutputFormat, RunConfig};
use error::AppResult;

#[derive(Parser)]
#[command(
    name = "ejmnet",
    version,
    about = "Exact outcome statistics for closed ring networks measured in the elegant joint basis family"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full outcome table of a three-party ring
    Triangle(TriangleArgs),
    /// All-equal and prefix-conditional statistics of an N-party ring
    Polygon(PolygonArgs),
    /// Emit one of the named data sets
    Figure(FigureArgs),
    /// Run the built-in check suite (exit 0 only when fully green)
    Verify,
    /// Dump the four measurement-basis states at an angle
    Basis(BasisArgs),
}

#[derive(Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Write to this file (atomically) instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Tolerance for exact-rational annotations
    #[arg(long)]
    tol: Option<f64>,
    /// JSON config file; command-line flags win on conflict
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct SourceArgs {
    /// Source pattern (letters s, p, a, w) or explicit spec list
    #[arg(long, visible_alias = "pattern")]
    sources: Option<String>,
    /// Measurement angle θ in radians
    #[arg(long)]
    theta: Option<f64>,
    /// α for `a` pattern sources
    #[arg(long)]
    alpha: Option<f64>,
    /// Visibility V for `w` pattern sources
    #[arg(long)]
    noise: Option<f64>,
}

#[derive(Args)]
struct TriangleArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct PolygonArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Number of parties (defaults to the source count)
    #[arg(long)]
    n: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct FigureArgs {
    /// Which data set to emit
    #[arg(value_enum)]
    name: FigureName,
    /// Sweep grid as START:STOP:POINTS (replaces the figure's default)
    #[arg(long)]
    grid: Option<String>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct BasisArgs {
    /// Measurement angle θ in radians
    #[arg(long)]
    theta: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

/// File config (when given) with the command line layered on top.
fn resolve(command: &str, source: Option<SourceArgs>, output: OutputArgs) -> AppResult<RunConfig> {
    let mut cfg = RunConfig::load(output.config.as_deref())?;
    cfg.command = command.into();
    if let Some(source) = source {
        cfg.sources = source.sources.or(cfg.sources.take());
        cfg.theta = source.theta.or(cfg.theta.take());
        cfg.alpha = source.alpha.or(cfg.alpha.take());
        cfg.noise = source.noise.or(cfg.noise.take());
    }
    if let Some(format) = output.format {
        cfg.format = format;
    }
    if let Some(out) = output.out {
        cfg.out = Some(out.display().to_string());
    }
    cfg.tol = output.tol.or(cfg.tol.take());
    Ok(cfg)
}

fn run(cli: Cli) -> AppResult<i32> {
    match cli.command {
        Command::Triangle(args) => {
            let mut cfg = resolve("triangle", Some(args.source), args.output)?;
            commands::cmd_triangle(&mut cfg)?;
            Ok(0)
        }
        Command::Polygon(args) => {
            let mut cfg = resolve("polygon", Some(args.source), args.output)?;
            cfg.n = args.n.or(cfg.n.take());
            commands::cmd_polygon(&mut cfg)?;
            Ok(0)
        }
        Command::Figure(args) => {
            let mut cfg = resolve("figure", None, args.output)?;
            cfg.grid = args.grid.or(cfg.grid.take());
            commands::cmd_figure(&mut cfg, args.name)?;
            Ok(0)
        }
        Command::Verify => commands::cmd_verify(),
        Command::Basis(args) => {
            let mut cfg = resolve("basis", None, args.output)?;
            cfg.theta = args.theta.or(cfg.theta.take());
            commands::cmd_basis(&mut cfg)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
