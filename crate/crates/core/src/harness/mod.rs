//! Seeded trials, statistics, trace files and the enumeration oracle.

mod oracle;
mod trace_io;
mod trials;

use std::path::{Path, PathBuf};
use std::time::Instant;

pub use oracle::{
    enumerate_reachable, oracle_optimum, EnumerationConfig, NodeCapExceeded, ReachableSet, DEFAULT_NODE_CAP,
};
pub use trace_io::{
    emit_trace, outcome_to_jsonl, parse_trace, read_trace, trace_to_jsonl, FinalLine, TraceFile, TraceIoError,
};
pub use trials::{format_mean_std, mean, std_dev, StdKind, TrialReport, TrialRow};

use crate::config::RunConfig;
use crate::error::ConfigError;
use crate::search::SearchOutcome;

/// Runs `cfg` once and renders the trace with the config echo.
pub fn run_to_jsonl(cfg: &RunConfig) -> Result<(SearchOutcome, String), ConfigError> {
    let outcome = cfg.execute()?;
    let text = outcome_to_jsonl(&outcome, Some(&cfg.to_value()));
    Ok((outcome, text))
}

#[derive(Debug, thiserror::Error)]
pub enum ReplayError {
    #[error(transparent)]
    Trace(#[from] TraceIoError),
    #[error("trace has no embedded config")]
    NoConfig,
    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// Re-runs the config embedded in a trace and returns the new trace text.
pub fn replay(trace: &TraceFile) -> Result<String, ReplayError> {
    let value = trace.last.config.clone().ok_or(ReplayError::NoConfig)?;
    let cfg: RunConfig = serde_json::from_value(value).map_err(ConfigError::from)?;
    Ok(run_to_jsonl(&cfg)?.1)
}

/// Where per-seed traces go: `<dir>/seed-<seed>.jsonl`.
pub fn seed_trace_path(dir: &Path, seed: u64) -> PathBuf {
    dir.join(format!("seed-{seed}.jsonl"))
}

/// Runs `cfg` once per seed on up to `jobs` threads. Rows come back in
/// seed order whatever the thread count. A seed whose run fails, or whose
/// trace cannot be written, is kept in the report with its error and left
/// out of the aggregate.
pub fn run_trials(
    cfg: &RunConfig,
    seeds: &[u64],
    jobs: usize,
    trace_dir: Option<&Path>,
    std_kind: StdKind,
) -> Result<TrialReport, ConfigError> {
    if seeds.is_empty() {
        return Err(ConfigError::invalid("at least one seed is required"));
    }
    cfg.validate()?;
    let one = |seed: u64| -> TrialRow {
        let started = Instant::now();
        let run = cfg.with_seed(seed);
        let mut row = TrialRow {
            seed,
            final_score: None,
            iterations: 0,
            calls: 0,
            wall_ms: 0,
            stop_reason: None,
            error: None,
        };
        match run_to_jsonl(&run) {
            Ok((out, text)) => {
                row.final_score = out.result_score();
                row.iterations = out.trace.iterations();
                row.stop_reason = Some(out.stop_reason());
                row.calls = out.calls_used;
                row.error = out.error.as_ref().map(ToString::to_string);
                if let Some(dir) = trace_dir {
                    if let Err(e) = trace_io::write_text(&seed_trace_path(dir, seed), &text) {
                        row.error = Some(e.to_string());
                    }
                }
            }
            Err(e) => row.error = Some(e.to_string()),
        }
        row.wall_ms = started.elapsed().as_millis() as u64;
        row
    };

    let jobs = jobs.clamp(1, seeds.len());
    let rows: Vec<TrialRow> = if jobs == 1 {
        seeds.iter().map(|&s| one(s)).collect()
    } else {
        let chunks: Vec<&[u64]> = seeds.chunks(seeds.len().div_ceil(jobs)).collect();
        std::thread::scope(|scope| {
            let handles: Vec<_> = chunks
                .into_iter()
                .map(|chunk| scope.spawn(|| chunk.iter().map(|&s| one(s)).collect::<Vec<_>>()))
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("trial thread panicked"))
                .collect()
        })
    };
    Ok(TrialReport::from_rows(rows, std_kind))
}
