use serde::{Deserialize, Serialize};

use crate::search::StopReason;

/// Which standard deviation a report uses.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StdKind {
    /// Divide by `n`.
    #[default]
    Population,
    /// Divide by `n - 1`.
    Sample,
}

/// One seed's outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub seed: u64,
    pub final_score: Option<f64>,
    pub iterations: usize,
    pub calls: u64,
    pub wall_ms: u64,
    pub stop_reason: Option<StopReason>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl TrialRow {
    /// Rows with a final score and no error enter the aggregate.
    pub fn counts(&self) -> bool {
        self.error.is_none() && self.final_score.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub per_seed: Vec<TrialRow>,
    pub mean: f64,
    pub std: f64,
    pub std_kind: StdKind,
    /// Seeds left out of the aggregate.
    pub failed: Vec<u64>,
}

impl TrialReport {
    pub fn from_rows(per_seed: Vec<TrialRow>, std_kind: StdKind) -> Self {
        let finals: Vec<f64> = per_seed
            .iter()
            .filter(|r| r.counts())
            .filter_map(|r| r.final_score)
            .collect();
        let failed = per_seed.iter().filter(|r| !r.counts()).map(|r| r.seed).collect();
        Self {
            mean: mean(&finals),
            std: std_dev(&finals, std_kind),
            per_seed,
            std_kind,
            failed,
        }
    }

    /// `mean±std` with two decimals.
    pub fn summary(&self) -> String {
        format_mean_std(self.mean, self.std)
    }

    /// `seed,final_score,calls` rows with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("seed,final_score,calls\n");
        for r in &self.per_seed {
            let score = r.final_score.map(|s| s.to_string()).unwrap_or_default();
            out.push_str(&format!("{},{},{}\n", r.seed, score, r.calls));
        }
        out
    }
}

/// Arithmetic mean; 0 for no values.
pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Standard deviation around the mean; 0 when undefined.
pub fn std_dev(xs: &[f64], kind: StdKind) -> f64 {
    let n = xs.len();
    let denom = match kind {
        StdKind::Population => n,
        StdKind::Sample => n.saturating_sub(1),
    };
    if denom == 0 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / denom as f64).sqrt()
}

pub fn format_mean_std(mean: f64, std: f64) -> String {
    format!("{mean:.2}±{std:.2}")
}
