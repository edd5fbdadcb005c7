use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::search::{IterationRecord, SearchOutcome, SearchTrace, StopReason};

#[derive(Debug, thiserror::Error)]
pub enum TraceIoError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Format {
        path: PathBuf,
        line: usize,
        message: String,
    },
}

/// The last line of a trace file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FinalLine {
    pub result: String,
    pub result_score: Option<f64>,
    pub stop_reason: StopReason,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Fully resolved run configuration, seed included.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<Value>,
}

/// A parsed trace file.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceFile {
    pub records: Vec<IterationRecord>,
    pub last: FinalLine,
}

/// Renders a trace as JSONL, one line per iteration plus the final line.
pub fn trace_to_jsonl(trace: &SearchTrace, error: Option<String>, config: Option<&Value>) -> String {
    let mut out = String::new();
    for r in &trace.records {
        let line = serde_json::to_string(r).expect("records serialize");
        writeln!(out, "{line}").expect("writing to a String");
    }
    let last = FinalLine {
        result: trace.result.clone(),
        result_score: trace.result_score,
        stop_reason: trace.stop_reason,
        error,
        config: config.cloned(),
    };
    writeln!(out, "{}", serde_json::to_string(&last).expect("final line serializes")).expect("writing to a String");
    out
}

/// Renders an outcome, including its error and the config echo.
pub fn outcome_to_jsonl(outcome: &SearchOutcome, config: Option<&Value>) -> String {
    trace_to_jsonl(&outcome.trace, outcome.error.as_ref().map(ToString::to_string), config)
}

/// Writes `trace` to `path` as JSONL.
pub fn emit_trace(trace: &SearchTrace, path: &Path) -> Result<(), TraceIoError> {
    write_text(path, &trace_to_jsonl(trace, None, None))
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<(), TraceIoError> {
    std::fs::write(path, text).map_err(|source| TraceIoError::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn parse_trace(text: &str, path: &Path) -> Result<TraceFile, TraceIoError> {
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    let format = |line: usize, message: String| TraceIoError::Format {
        path: path.to_owned(),
        line,
        message,
    };
    let Some((last, body)) = lines.split_last() else {
        return Err(format(1, "empty trace".into()));
    };
    let records = body
        .iter()
        .enumerate()
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| format(i + 1, e.to_string())))
        .collect::<Result<Vec<IterationRecord>, _>>()?;
    let last: FinalLine = serde_json::from_str(last).map_err(|e| format(lines.len(), e.to_string()))?;
    Ok(TraceFile { records, last })
}

pub fn read_trace(path: &Path) -> Result<TraceFile, TraceIoError> {
    let text = std::fs::read_to_string(path).map_err(|source| TraceIoError::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_trace(&text, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::TraceCandidate;

    fn sample() -> SearchTrace {
        SearchTrace {
            records: vec![IterationRecord {
                iter: 1,
                best_score: 0.5,
                accepted: "a b".into(),
                candidates: vec![TraceCandidate {
                    prompt: "a b".into(),
                    score: 0.5,
                }],
                budget_used: 2,
                patience: 7,
            }],
            result: "a b".into(),
            result_score: Some(0.5),
            stop_reason: StopReason::Iterations,
        }
    }

    #[test]
    fn layout() {
        let text = trace_to_jsonl(&sample(), None, None);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(
            lines[0],
            r#"{"iter":1,"best_score":0.5,"accepted":"a b","candidates":[{"prompt":"a b","score":0.5}],"budget_used":2,"patience":7}"#
        );
        assert_eq!(
            lines[1],
            r#"{"result":"a b","result_score":0.5,"stop_reason":"iterations"}"#
        );
    }

    #[test]
    fn zero_iteration_trace_is_one_line() {
        let t = SearchTrace {
            records: vec![],
            result: "x".into(),
            result_score: None,
            stop_reason: StopReason::Budget,
        };
        let text = trace_to_jsonl(&t, None, None);
        assert_eq!(
            text,
            "{\"result\":\"x\",\"result_score\":null,\"stop_reason\":\"budget\"}\n"
        );
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.jsonl");
        emit_trace(&sample(), &path).unwrap();
        let back = read_trace(&path).unwrap();
        assert_eq!(back.records, sample().records);
        assert_eq!(back.last.result_score, Some(0.5));
        let err = emit_trace(&sample(), &dir.path().join("missing/t.jsonl")).unwrap_err();
        assert!(err.to_string().contains("missing"));
    }
}
