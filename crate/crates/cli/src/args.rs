use std::net::SocketAddr;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use maintsched_core::InsertionPolicy;

#[derive(Debug, Parser)]
#[command(name = "maintsched", version, about = "Single-machine maintenance scheduling")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate a scenario without scheduling it.
    Validate(InputArgs),
    /// Plan the preventive tasks and print the baseline cost report.
    Schedule(RunArgs),
    /// Plan, then insert dynamic tasks and print the result.
    Insert(RunArgs),
    /// Plan, insert, and print only the final cost report.
    Report(RunArgs),
    /// Recompute a bundled published run and compare with its listing.
    Replay(ReplayArgs),
    /// Export the final schedule as gantt rows.
    Export(ExportArgs),
    /// Start the HTTP session service.
    Serve(ServeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum ExportFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Scenario file (`-` for stdin).
    pub scenario: PathBuf,
    /// Input format; guessed from the extension when omitted.
    #[arg(long, value_enum)]
    pub input_format: Option<InputFormat>,
    #[arg(long, value_enum, default_value_t)]
    pub format: OutputFormat,
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Overrides {
    /// Dynamic tasks to insert, in arrival order; replaces the scenario's own.
    #[arg(long)]
    pub dynamics: Option<PathBuf>,
    /// first_fit, best_fit or append; overrides the scenario's policy
    #[arg(long, value_parser = parse_policy)]
    pub policy: Option<InsertionPolicy>,
    /// Hourly rate in currency units.
    #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
    pub rate: Option<i64>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    /// tableau1, run3dyn or run9dyn
    pub fixture: String,
    #[arg(long, value_enum, default_value_t)]
    pub format: OutputFormat,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    pub scenario: PathBuf,
    #[arg(long, value_enum)]
    pub input_format: Option<InputFormat>,
    #[arg(long, value_enum, default_value_t)]
    pub format: ExportFormat,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    /// Defaults to $MAINTSCHED_LISTEN or 127.0.0.1:8080.
    #[arg(long)]
    pub listen: Option<SocketAddr>,
    /// Append-only event log; existing sessions in it are restored.
    #[arg(long)]
    pub event_log: Option<PathBuf>,
    /// Policy for sessions that do not choose one (first_fit, best_fit, append)
    #[arg(long, value_parser = parse_policy)]
    pub policy: Option<InsertionPolicy>,
}

fn parse_policy(s: &str) -> Result<InsertionPolicy, String> {
    s.parse().map_err(|e: maintsched_core::Error| e.to_string())
}
