#![allow(dead_code)]

use plum_core::config::RunConfig;
use plum_core::search::Algorithm;
use serde_json::{json, Value};

/// Small problems covering the three scorer kinds and segmenter modes.
pub fn fixtures() -> Vec<Value> {
    vec![
        json!({
            "initial_prompt": "write a short poem about the sea",
            "scorer": {"kind": "keyword", "targets": ["verse", "sea", "vivid"]},
            "edits": {
                "extra_phrases": ["vivid", "calm"],
                "paraphrases": {"poem": ["verse", "song"], "short": ["brief"]}
            }
        }),
        json!({
            "initial_prompt": "d c b a",
            "scorer": {"kind": "target-distance", "target": "a b c d"}
        }),
        json!({
            "initial_prompt": "Let us think, step by step, and answer",
            "segmenter": {"mode": "delimiter", "delimiter": ","},
            "scorer": {"kind": "keyword", "targets": ["brainstorm", "slowly", "answer"]},
            "edits": {
                "paraphrases": {
                    "Let us think": ["Let us brainstorm"],
                    "step by step": ["slowly", "in order"]
                }
            }
        }),
        json!({
            "initial_prompt": "classify the review as positive or negative",
            "segmenter": {"mode": "whitespace", "tokens_per_segment": 2},
            "scorer": {"kind": "table-lookup", "default": 0.2, "table": {
                "classify the review as positive or negative": 0.3,
                "classify the as positive or negative": 0.45,
                "review as positive or negative": 0.6
            }}
        }),
    ]
}

/// Builds a run config from a fixture plus extra top-level keys.
pub fn config(fixture: &Value, algorithm: Algorithm, seed: u64, extra: Value) -> RunConfig {
    let mut v = fixture.clone();
    let obj = v.as_object_mut().expect("fixture is an object");
    obj.insert("algorithm".into(), json!(algorithm.id()));
    obj.insert("seed".into(), json!(seed));
    for (k, x) in extra.as_object().expect("extra is an object") {
        match (obj.get_mut(k), x) {
            (Some(Value::Object(dst)), Value::Object(src)) => {
                for (kk, xx) in src {
                    dst.insert(kk.clone(), xx.clone());
                }
            }
            _ => {
                obj.insert(k.clone(), x.clone());
            }
        }
    }
    serde_json::from_value(v).expect("fixture config parses")
}

/// Score of the initial prompt under the config's own objective.
pub fn initial_score(cfg: &RunConfig) -> f64 {
    let mut objective = cfg.scorer.objective(&cfg.segmenter).unwrap();
    objective.evaluate(&cfg.initial()).unwrap().score
}
