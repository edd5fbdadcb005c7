use std::fs;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use plum_core::config::{Overrides, RunConfig};
use plum_core::harness::{
    enumerate_reachable, oracle_optimum, read_trace, replay as replay_trace, run_to_jsonl, run_trials, seed_trace_path,
    EnumerationConfig,
};

use crate::{OracleArgs, OverrideArgs, ReplayArgs, RunArgs, SweepArgs};

const USAGE: u8 = 2;
const RUNTIME: u8 = 1;

pub struct Failure {
    pub code: ExitCode,
    pub error: anyhow::Error,
}

fn usage(error: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: ExitCode::from(USAGE),
        error: error.into(),
    }
}

fn runtime(error: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: ExitCode::from(RUNTIME),
        error: error.into(),
    }
}

pub type Outcome = Result<ExitCode, Failure>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seeds(pub Vec<u64>);

pub fn parse_seeds(s: &str) -> Result<Seeds, String> {
    let num = |x: &str| x.trim().parse::<u64>().map_err(|e| format!("bad seed {x:?}: {e}"));
    let seeds: Vec<u64> = if let Some((a, b)) = s.split_once("..=") {
        (num(a)?..=num(b)?).collect()
    } else if let Some((a, b)) = s.split_once("..") {
        (num(a)?..num(b)?).collect()
    } else {
        s.split(',').map(num).collect::<Result<_, _>>()?
    };
    if seeds.is_empty() {
        return Err(format!("seed range {s:?} is empty"));
    }
    Ok(Seeds(seeds))
}

fn load(path: &Path, seed: Option<u64>, o: &OverrideArgs) -> Result<RunConfig, Failure> {
    let mut cfg = RunConfig::from_path(path).map_err(usage)?;
    Overrides {
        algorithm: o.algorithm,
        seed,
        max_iterations: o.max_iterations,
        candidates: o.candidates,
        patience: o.patience,
        budget: o.budget,
    }
    .apply(&mut cfg);
    cfg.validate().map_err(usage)?;
    Ok(cfg)
}

fn refuse_overwrite(path: &Path, force: bool) -> Result<(), Failure> {
    if path.exists() && !force {
        return Err(usage(anyhow!("{} exists; pass --force to overwrite", path.display())));
    }
    Ok(())
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)
            .with_context(|| format!("creating {}", dir.display()))
            .map_err(runtime)?;
    }
    fs::write(path, text)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(runtime)
}

fn score_text(score: Option<f64>) -> String {
    score.map_or_else(|| "none".to_owned(), |s| format!("{s:.4}"))
}

pub fn run(args: RunArgs) -> Outcome {
    let cfg = load(&args.config, args.seed, &args.overrides)?;
    if let Some(out) = &args.output {
        refuse_overwrite(out, args.force)?;
    }
    log::info!("running {} with seed {}", cfg.algorithm, cfg.seed);
    let (outcome, text) = run_to_jsonl(&cfg).map_err(usage)?;
    if let Some(out) = &args.output {
        write(out, &text)?;
    }
    println!("result: {}", outcome.result.render());
    println!("score: {}", score_text(outcome.result_score()));
    println!("calls: {}", outcome.calls_used);
    println!("stop: {}", outcome.stop_reason());
    match outcome.error {
        Some(err) => Err(runtime(err)),
        None => Ok(ExitCode::SUCCESS),
    }
}

pub fn sweep(args: SweepArgs) -> Outcome {
    let cfg = load(&args.config, None, &args.overrides)?;
    let seeds = &args.seeds.0;
    if let Some(dir) = &args.output {
        refuse_overwrite(&dir.join("report.json"), args.force)?;
        for &seed in seeds {
            refuse_overwrite(&seed_trace_path(dir, seed), args.force)?;
        }
        fs::create_dir_all(dir)
            .with_context(|| format!("creating {}", dir.display()))
            .map_err(runtime)?;
    }
    if let Some(csv) = &args.csv {
        refuse_overwrite(csv, args.force)?;
    }

    let report = run_trials(&cfg, seeds, args.jobs, args.output.as_deref(), args.std.into()).map_err(usage)?;
    for row in &report.per_seed {
        match &row.error {
            None => println!(
                "seed {}: {} ({} calls, {} iterations)",
                row.seed,
                score_text(row.final_score),
                row.calls,
                row.iterations
            ),
            Some(e) => println!("seed {}: failed: {e}", row.seed),
        }
    }
    println!("{}", report.summary());

    if let Some(dir) = &args.output {
        let json = serde_json::to_string_pretty(&report).map_err(runtime)?;
        write(&dir.join("report.json"), &(json + "\n"))?;
    }
    if let Some(csv) = &args.csv {
        write(csv, &report.to_csv())?;
    }
    if report.failed.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        Err(runtime(anyhow!(
            "{} of {} seeds failed: {:?}",
            report.failed.len(),
            seeds.len(),
            report.failed
        )))
    }
}

pub fn oracle(args: OracleArgs) -> Outcome {
    let cfg = RunConfig::from_path(&args.config).map_err(usage)?;
    cfg.validate().map_err(usage)?;
    if !cfg.scorer.is_local() {
        return Err(usage(anyhow!("the oracle needs a local scorer")));
    }
    if cfg.edits.paraphrase_endpoint.is_some() {
        return Err(usage(anyhow!("the oracle needs a local paraphrase table")));
    }
    let extra = cfg.edits.extra_segments().map_err(usage)?;
    let mut provider = cfg.edits.provider().map_err(usage)?;
    let set = enumerate_reachable(
        &cfg.initial(),
        EnumerationConfig {
            ops: &cfg.edits.ops,
            extra_phrases: &extra,
            provider: provider.as_mut(),
            node_cap: args.node_cap,
        },
        args.depth,
    )
    .map_err(runtime)?;
    let mut objective = cfg.scorer.objective(&cfg.segmenter).map_err(usage)?;
    let (best, score) = oracle_optimum(&set, objective.as_mut()).map_err(runtime)?;
    println!("reachable: {}", set.len());
    println!("optimum: {}", best.render());
    println!("score: {score:.4}");
    Ok(ExitCode::SUCCESS)
}

pub fn replay(args: ReplayArgs) -> Outcome {
    let original = read_trace(&args.trace).map_err(usage)?;
    if let Some(out) = &args.output {
        refuse_overwrite(out, args.force)?;
    }
    let text = replay_trace(&original).map_err(usage)?;
    if let Some(out) = &args.output {
        write(out, &text)?;
    }
    let before = fs::read_to_string(&args.trace)
        .with_context(|| format!("reading {}", args.trace.display()))
        .map_err(runtime)?;
    if before == text {
        println!("replay matches {}", args.trace.display());
        Ok(ExitCode::SUCCESS)
    } else {
        println!("replay differs from {}", args.trace.display());
        Ok(ExitCode::from(RUNTIME))
    }
}
