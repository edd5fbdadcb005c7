use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StopReason {
    /// Ran the configured number of iterations.
    Iterations,
    Patience,
    Budget,
    /// Scoring failed; the result is the best found before the failure.
    Error,
}

impl StopReason {
    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::Iterations => "iterations",
            StopReason::Patience => "patience",
            StopReason::Budget => "budget",
            StopReason::Error => "error",
        }
    }
}

impl std::fmt::Display for StopReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceCandidate {
    pub prompt: String,
    pub score: f64,
}

/// One iteration. Field order is the JSONL line order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iter: usize,
    /// Best score found so far, after this iteration.
    pub best_score: f64,
    /// The prompt the algorithm carries into the next iteration.
    pub accepted: String,
    pub candidates: Vec<TraceCandidate>,
    pub budget_used: u64,
    pub patience: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchTrace {
    pub records: Vec<IterationRecord>,
    pub result: String,
    /// `None` only when the initial prompt could not be scored.
    pub result_score: Option<f64>,
    pub stop_reason: StopReason,
}

impl SearchTrace {
    pub fn iterations(&self) -> usize {
        self.records.len()
    }

    /// True if `best_score` never decreases across records.
    pub fn is_monotone(&self) -> bool {
        self.records.windows(2).all(|w| w[1].best_score >= w[0].best_score)
    }

    /// Running best scores, one per iteration.
    pub fn best_curve(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.best_score).collect()
    }
}
