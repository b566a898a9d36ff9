//! `sqlminer` command-line front end.
//!
//! Exit codes: 0 success, 1 data error (unreadable or malformed input,
//! engine/oracle mismatch), 2 usage error.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "sqlminer",
    version,
    about = "Declarative process discovery over CSV event logs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Mine constraints above the support and confidence thresholds.
    Discover(DiscoverArgs),
    /// Print the discovery SQL for one or all templates.
    EmitSql(EmitSqlArgs),
    /// Compare the indexed engine against the brute-force oracle.
    Validate(ValidateArgs),
    /// Write a seeded synthetic event log.
    Generate(GenerateArgs),
    /// Summarise an event log.
    Stats(StatsArgs),
}

/// Input files and CSV header names.
#[derive(Args, Debug, Clone)]
pub struct LogArgs {
    #[arg(long)]
    pub log: Option<PathBuf>,
    /// Organisational relations CSV (resource,relation_type,group).
    #[arg(long)]
    pub relations: Option<PathBuf>,
    #[arg(long, default_value = "event_id")]
    pub col_event_id: String,
    #[arg(long, default_value = "trace_id")]
    pub col_trace_id: String,
    #[arg(long, default_value = "activity")]
    pub col_activity: String,
    #[arg(long, default_value = "timestamp")]
    pub col_timestamp: String,
    #[arg(long, default_value = "resource")]
    pub col_resource: String,
}

#[derive(Args, Debug, Clone)]
pub struct MiningArgs {
    /// Comma-separated template names. Defaults to all templates, or to
    /// those not needing roles when no relations are given.
    #[arg(long, value_delimiter = ',')]
    pub templates: Vec<String>,
    #[arg(long, default_value = "0.7")]
    pub min_support: String,
    #[arg(long, default_value = "0.5")]
    pub min_confidence: String,
    /// Worker threads; output does not depend on it.
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Args, Debug)]
pub struct DiscoverArgs {
    #[command(flatten)]
    pub input: LogArgs,
    #[command(flatten)]
    pub mining: MiningArgs,
    #[arg(long, default_value = "csv")]
    pub format: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Emit every candidate with a `passed` column.
    #[arg(long)]
    pub audit: bool,
    /// Write a JSON run report (digests, counts, timing) here.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Accepted for interface uniformity; discovery is deterministic.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug)]
pub struct EmitSqlArgs {
    /// One or more comma-separated template names.
    #[arg(
        long,
        value_delimiter = ',',
        conflicts_with = "all",
        required_unless_present = "all"
    )]
    pub template: Vec<String>,
    #[arg(long)]
    pub all: bool,
    /// Join several queries with UNION instead of listing them one by one.
    #[arg(long)]
    pub union: bool,
    #[arg(long, default_value = "verbatim")]
    pub mode: String,
    #[arg(long, default_value = "0.7")]
    pub min_support: String,
    #[arg(long, default_value = "0.5")]
    pub min_confidence: String,
    #[arg(long, default_value = "Log")]
    pub table: String,
    #[arg(long, default_value = "Task")]
    pub col_task: String,
    #[arg(long, default_value = "Instance")]
    pub col_instance: String,
    #[arg(long, default_value = "Time")]
    pub col_time: String,
    #[arg(long, default_value = "Resource")]
    pub col_resource: String,
    #[arg(long, default_value = "Relation")]
    pub relation_table: String,
    #[arg(long, default_value = "Resource")]
    pub col_rel_resource: String,
    #[arg(long, default_value = "RelationType")]
    pub col_relation_type: String,
    #[arg(long, default_value = "Group")]
    pub col_group: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub input: LogArgs,
    #[command(flatten)]
    pub mining: MiningArgs,
    /// Also report where the SQL listings count differently from the engine.
    #[arg(long)]
    pub listing_deltas: bool,
    #[arg(long, default_value = "corrected")]
    pub mode: String,
    /// Validate this many generated logs instead of --log.
    #[arg(long, conflicts_with = "log")]
    pub sweep: Option<u64>,
    /// First seed of the sweep.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Damage the occurrence index before evaluating (test hook).
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(long, default_value_t = 8)]
    pub alphabet: usize,
    #[arg(long, default_value_t = 100)]
    pub traces: usize,
    #[arg(long, default_value_t = 3)]
    pub min_len: usize,
    #[arg(long, default_value_t = 12)]
    pub max_len: usize,
    #[arg(long, default_value_t = 5)]
    pub resources: usize,
    #[arg(long, default_value_t = 3)]
    pub groups: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Planted constraint as `Template:a:b`.
    #[arg(long)]
    pub plant: Option<String>,
    #[arg(long, default_value_t = 1.0, requires = "plant")]
    pub rate: f64,
    #[arg(long, default_value_t = 1.0, requires = "plant")]
    pub coverage: f64,
    /// Event log destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub relations_out: Option<PathBuf>,
    /// JSON file receiving activity counts and planted-constraint counts.
    #[arg(long)]
    pub bookkeeping: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct StatsArgs {
    #[command(flatten)]
    pub input: LogArgs,
    #[arg(long, default_value = "json")]
    pub format: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Discover(a) => commands::discover(a),
        Command::EmitSql(a) => commands::emit_sql(a),
        Command::Validate(a) => commands::validate(a),
        Command::Generate(a) => commands::generate(a),
        Command::Stats(a) => commands::stats(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(commands::exit_code(&err))
        }
    }
}
