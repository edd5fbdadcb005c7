//! Browser bindings. Every export takes and returns JSON text so the page
//! needs no generated types.

use plum_core::config::RunConfig;
use plum_core::harness::{enumerate_reachable, oracle_optimum, outcome_to_jsonl, EnumerationConfig};
use plum_core::search::harmony_segment_bounds;
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Reachable sets larger than this are refused to keep the tab responsive.
pub const BROWSER_NODE_CAP: usize = 20_000;

#[derive(Serialize)]
struct SearchSummary {
    result: String,
    result_score: Option<f64>,
    stop_reason: String,
    calls: u64,
    iterations: usize,
    best_curve: Vec<f64>,
    trace: String,
}

#[derive(Serialize)]
struct OracleSummary {
    reachable: usize,
    optimum: String,
    score: f64,
}

fn parse_config(config_json: &str) -> Result<RunConfig, String> {
    let cfg = RunConfig::from_json(config_json).map_err(|e| e.to_string())?;
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

pub fn search_json(config_json: &str) -> Result<String, String> {
    let cfg = parse_config(config_json)?;
    let outcome = cfg.execute().map_err(|e| e.to_string())?;
    to_json(&SearchSummary {
        result: outcome.result.render(),
        result_score: outcome.result_score(),
        stop_reason: outcome.stop_reason().to_string(),
        calls: outcome.calls_used,
        iterations: outcome.trace.iterations(),
        best_curve: outcome.trace.best_curve(),
        trace: outcome_to_jsonl(&outcome, Some(&cfg.to_value())),
    })
}

pub fn oracle_json(config_json: &str, depth: usize) -> Result<String, String> {
    let cfg = parse_config(config_json)?;
    if !cfg.scorer.is_local() || cfg.edits.paraphrase_endpoint.is_some() {
        return Err("the oracle needs a local scorer and paraphrase table".into());
    }
    let extra = cfg.edits.extra_segments().map_err(|e| e.to_string())?;
    let mut table = cfg.edits.table();
    let set = enumerate_reachable(
        &cfg.initial(),
        EnumerationConfig {
            ops: &cfg.edits.ops,
            extra_phrases: &extra,
            provider: &mut table,
            node_cap: BROWSER_NODE_CAP,
        },
        depth,
    )
    .map_err(|e| e.to_string())?;
    let mut objective = cfg.scorer.objective(&cfg.segmenter).map_err(|e| e.to_string())?;
    let (best, score) = oracle_optimum(&set, objective.as_mut()).map_err(|e| e.to_string())?;
    to_json(&OracleSummary {
        reachable: set.len(),
        optimum: best.render(),
        score,
    })
}

pub fn bounds_json(len: usize, k_s: usize) -> Result<String, String> {
    if len == 0 || k_s == 0 {
        return Err("length and slice count must be positive".into());
    }
    let slices: Vec<(usize, usize)> = (1..=k_s).filter_map(|j| harmony_segment_bounds(j, k_s, len)).collect();
    to_json(&slices)
}

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

/// Runs the search described by a config and returns a summary with the
/// full trace.
#[wasm_bindgen(js_name = runSearch)]
pub fn run_search(config_json: &str) -> Result<String, JsValue> {
    js(search_json(config_json))
}

/// Best prompt in the reachable set up to `depth` edits.
#[wasm_bindgen(js_name = oracle)]
pub fn oracle(config_json: &str, depth: usize) -> Result<String, JsValue> {
    js(oracle_json(config_json, depth))
}

/// Inclusive `[start, end]` pairs of the harmony slices of a prompt.
#[wasm_bindgen(js_name = harmonyBounds)]
pub fn harmony_bounds(len: usize, k_s: usize) -> Result<String, JsValue> {
    js(bounds_json(len, k_s))
}
