//! `polycut`: command-line front end for the dissection engine and the puzzle labs.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polycut_core::probability::{BirthdayFormula, Strategy};
use polycut_core::CutModel;

#[derive(Debug, Parser)]
#[command(name = "polycut", version, about = "Polyomino dissection and classic puzzle labs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimum, greedy and survey dissections.
    #[command(subcommand)]
    Dissect(DissectCommand),
    /// Same as `dissect survey`.
    Survey(SurveyArgs),
    /// Monty Hall exact probabilities and simulation.
    #[command(subcommand)]
    Monty(MontyCommand),
    /// Birthday collision probability, curve or threshold.
    Birthday(BirthdayArgs),
    /// Tower of Hanoi move list.
    Hanoi(SizeArgs),
    /// All solutions of the n-queens problem.
    Queens(SizeArgs),
    /// A knight's tour on a rows x cols board.
    Knight(KnightArgs),
    /// Fewest queens attacking or occupying every square of an n x n board.
    Domination(SizeArgs),
    /// All magic squares of the given order.
    Magic(MagicArgs),
    /// Run the HTTP service.
    Serve(ServeArgs),
}

#[derive(Debug, Subcommand)]
pub enum DissectCommand {
    /// Exact minimum number of cuts with a witness sequence.
    Min(ShapeArgs),
    /// Fast greedy dissection into unit squares.
    Greedy(ShapeArgs),
    /// Compare the minimum with N-1 over every shape up to a size.
    Survey(SurveyArgs),
}

#[derive(Debug, Args)]
pub struct ShapeArgs {
    /// Preset name, path to an ASCII or JSON shape file, or inline ASCII with `/` between rows.
    #[arg(long)]
    pub shape: String,
    #[arg(long, default_value = "single-split", value_parser = parse_model)]
    pub model: CutModel,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SurveyArgs {
    #[arg(long)]
    pub nmax: usize,
    #[arg(long, default_value = "single-split", value_parser = parse_model)]
    pub model: CutModel,
    /// Worker threads; results do not depend on it.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum MontyCommand {
    /// Exact win probabilities and the outcome tree.
    Exact {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Seeded Monte Carlo estimate.
    Simulate(MontySimArgs),
}

#[derive(Debug, Args)]
pub struct MontySimArgs {
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Simulate only this strategy (default: both).
    #[arg(long, value_parser = parse_strategy)]
    pub strategy: Option<Strategy>,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct BirthdayArgs {
    /// Group size for a single value.
    #[arg(long, conflicts_with_all = ["nmax", "target"])]
    pub n: Option<u32>,
    /// Print the curve for n = 1..=nmax.
    #[arg(long, conflicts_with = "target")]
    pub nmax: Option<u32>,
    /// Smallest n whose probability reaches this target.
    #[arg(long)]
    pub target: Option<f64>,
    #[arg(long, value_parser = parse_formula)]
    pub formula: Option<BirthdayFormula>,
    /// Add a simulated column with this many trials per n.
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SizeArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct KnightArgs {
    #[arg(long)]
    pub rows: u32,
    #[arg(long)]
    pub cols: u32,
    /// Starting square as `row,col`.
    #[arg(long, default_value = "0,0", value_parser = parse_start)]
    pub start: (i64, i64),
    /// Require the last square to be a knight's move from the first.
    #[arg(long)]
    pub closed: bool,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct MagicArgs {
    #[arg(long, default_value_t = 3)]
    pub order: u32,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, env = "PORT", default_value_t = 8080)]
    pub port: u16,
    #[arg(long, env = "SNAPSHOT_PATH")]
    pub snapshot: Option<PathBuf>,
    #[arg(long, env = "SEED", default_value_t = 0)]
    pub seed: u64,
}

fn parse_model(s: &str) -> Result<CutModel, String> {
    s.parse()
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse()
}

fn parse_formula(s: &str) -> Result<BirthdayFormula, String> {
    s.parse()
}

fn parse_start(s: &str) -> Result<(i64, i64), String> {
    let bad = || format!("expected row,col, got {s:?}");
    let (r, c) = s.split_once(',').ok_or_else(bad)?;
    Ok((r.trim().parse().map_err(|_| bad())?, c.trim().parse().map_err(|_| bad())?))
}

/// Failures after argument parsing. Usage errors exit with 2, domain errors with 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Domain(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
