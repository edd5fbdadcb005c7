mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use plum_core::harness::StdKind;
use plum_core::search::Algorithm;

/// Metaheuristic prompt search.
#[derive(Debug, Parser)]
#[command(name = "plum", version, about)]
struct Cli {
    /// More log output on stderr (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one search and write its trace.
    Run(RunArgs),
    /// Run one search per seed and report mean±std of the final scores.
    Sweep(SweepArgs),
    /// Enumerate the reachable set and print its best prompt.
    Oracle(OracleArgs),
    /// Re-run the config embedded in a trace and compare the output.
    Replay(ReplayArgs),
}

/// Values that replace the config file's.
#[derive(Debug, Args)]
struct OverrideArgs {
    #[arg(long)]
    algorithm: Option<Algorithm>,
    #[arg(long)]
    max_iterations: Option<usize>,
    #[arg(long)]
    candidates: Option<usize>,
    #[arg(long)]
    patience: Option<usize>,
    /// Maximum scorer calls, initial scoring included.
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Trace path (JSONL). Nothing is written when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Overwrite an existing output file.
    #[arg(long)]
    force: bool,
    #[command(flatten)]
    overrides: OverrideArgs,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    /// Seeds as `a..b` (exclusive), `a..=b`, or a comma list.
    #[arg(long, value_parser = commands::parse_seeds)]
    seeds: commands::Seeds,
    /// Directory for `report.json` and one trace per seed.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Also write per-seed scores as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Worker threads. Output order does not depend on it.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, value_enum, default_value = "population")]
    std: StdArg,
    #[arg(long)]
    force: bool,
    #[command(flatten)]
    overrides: OverrideArgs,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum StdArg {
    Population,
    Sample,
}

impl From<StdArg> for StdKind {
    fn from(s: StdArg) -> Self {
        match s {
            StdArg::Population => StdKind::Population,
            StdArg::Sample => StdKind::Sample,
        }
    }
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    depth: usize,
    #[arg(long, default_value_t = plum_core::harness::DEFAULT_NODE_CAP)]
    node_cap: usize,
}

#[derive(Debug, Args)]
struct ReplayArgs {
    trace: PathBuf,
    /// Write the regenerated trace here.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    force: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();

    let result = match cli.command {
        Command::Run(args) => commands::run(args),
        Command::Sweep(args) => commands::sweep(args),
        Command::Oracle(args) => commands::oracle(args),
        Command::Replay(args) => commands::replay(args),
    };
    match result {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {:#}", failure.error);
            failure.code
        }
    }
}
