//! The objective: local synthetic scorers, the remote client, and the
//! [`Scorer`] wrapper that owns the cache and the call ledger.

mod local;
#[cfg(feature = "remote")]
mod remote;
mod spec;

use std::collections::HashMap;

use crate::budget::BudgetLedger;
use crate::error::ScoreError;
use crate::prompt::Prompt;

pub use local::{
    accuracy, score_keyword, score_target_distance, segment_distance, AccuracyObjective, Example, KeywordObjective,
    TableObjective, TargetDistanceObjective,
};
#[cfg(feature = "remote")]
pub use remote::{parse_score_response, score_remote, RemoteObjective};
pub use spec::{load_examples, ScorerKind, ScorerSpec};

/// One objective evaluation and the number of budget calls it cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub score: f64,
    pub calls: u64,
}

impl Evaluation {
    pub fn local(score: f64) -> Self {
        Self { score, calls: 1 }
    }
}

/// A black-box objective `f(p)` with values in `[0, 1]`.
pub trait Objective {
    fn evaluate(&mut self, p: &Prompt) -> Result<Evaluation, ScoreError>;

    /// Local objectives are pure and may be enumerated by the oracle.
    fn is_local(&self) -> bool {
        true
    }

    /// How many evaluations may run at once.
    fn max_in_flight(&self) -> usize {
        1
    }

    /// Evaluates a batch; results are in input order.
    fn evaluate_many(&mut self, prompts: &[Prompt]) -> Vec<Result<Evaluation, ScoreError>> {
        prompts.iter().map(|p| self.evaluate(p)).collect()
    }
}

impl<T: Objective + ?Sized> Objective for Box<T> {
    fn evaluate(&mut self, p: &Prompt) -> Result<Evaluation, ScoreError> {
        (**self).evaluate(p)
    }
    fn is_local(&self) -> bool {
        (**self).is_local()
    }
    fn max_in_flight(&self) -> usize {
        (**self).max_in_flight()
    }
    fn evaluate_many(&mut self, prompts: &[Prompt]) -> Vec<Result<Evaluation, ScoreError>> {
        (**self).evaluate_many(prompts)
    }
}

/// Scores keyed by rendered prompt text.
#[derive(Debug, Clone, Default)]
pub struct ScoreCache {
    map: HashMap<String, f64>,
}

impl ScoreCache {
    pub fn get(&self, key: &str) -> Option<f64> {
        self.map.get(key).copied()
    }

    pub fn insert(&mut self, key: String, score: f64) {
        self.map.entry(key).or_insert(score);
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Scores of a batch, in input order, up to the first failure.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchScores {
    pub scores: Vec<f64>,
    pub error: Option<ScoreError>,
}

/// Objective plus cache plus budget ledger. Every evaluation in a run goes
/// through here so `calls_used` is exact.
pub struct Scorer {
    objective: Box<dyn Objective>,
    cache: Option<ScoreCache>,
    cached_hits_consume_budget: bool,
    ledger: BudgetLedger,
}

impl std::fmt::Debug for Scorer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Scorer")
            .field("cache", &self.cache.as_ref().map(ScoreCache::len))
            .field("cached_hits_consume_budget", &self.cached_hits_consume_budget)
            .field("ledger", &self.ledger)
            .finish()
    }
}

impl Scorer {
    pub fn new(objective: Box<dyn Objective>, ledger: BudgetLedger) -> Self {
        Self {
            objective,
            cache: Some(ScoreCache::default()),
            cached_hits_consume_budget: false,
            ledger,
        }
    }

    pub fn with_cache(mut self, enabled: bool) -> Self {
        self.cache = enabled.then(ScoreCache::default);
        self
    }

    pub fn with_cached_hits_consume_budget(mut self, yes: bool) -> Self {
        self.cached_hits_consume_budget = yes;
        self
    }

    pub fn ledger(&self) -> &BudgetLedger {
        &self.ledger
    }

    pub fn calls_used(&self) -> u64 {
        self.ledger.calls_used()
    }

    pub fn is_local(&self) -> bool {
        self.objective.is_local()
    }

    pub fn score(&mut self, p: &Prompt) -> Result<f64, ScoreError> {
        let batch = self.score_batch(std::slice::from_ref(p));
        match batch.error {
            Some(e) => Err(e),
            None => Ok(batch.scores[0]),
        }
    }

    /// Scores `prompts` in order. Cache misses are sent to the objective in
    /// chunks of at most `max_in_flight`; ledger charges are applied in input
    /// order, and scoring stops at the first failure or overrun.
    pub fn score_batch(&mut self, prompts: &[Prompt]) -> BatchScores {
        let mut scores = Vec::with_capacity(prompts.len());
        let chunk = self.objective.max_in_flight().max(1);
        let mut i = 0;
        while i < prompts.len() {
            match self.cached(&prompts[i]) {
                Ok(Some(hit)) => {
                    scores.push(hit);
                    i += 1;
                    continue;
                }
                Ok(None) => {}
                Err(e) => return BatchScores { scores, error: Some(e) },
            }
            // Gather a run of consecutive misses, distinct by text, that the
            // budget can cover at one call each.
            let mut keys: Vec<String> = Vec::new();
            let mut end = i;
            while end < prompts.len() && keys.len() < chunk {
                let key = prompts[end].render();
                if self.cache.as_ref().is_some_and(|c| c.get(&key).is_some()) || keys.contains(&key) {
                    break;
                }
                if !self.ledger.can_spend(keys.len() as u64 + 1) {
                    break;
                }
                keys.push(key);
                end += 1;
            }
            if keys.is_empty() {
                return BatchScores {
                    scores,
                    error: Some(ScoreError::BudgetExhausted),
                };
            }
            if prompts[i..end].iter().any(Prompt::is_empty) {
                return BatchScores {
                    scores,
                    error: Some(ScoreError::EmptyPrompt),
                };
            }
            let results = self.objective.evaluate_many(&prompts[i..end]);
            for (key, result) in keys.into_iter().zip(results) {
                let eval = match result {
                    Ok(e) => e,
                    Err(e) => return BatchScores { scores, error: Some(e) },
                };
                if self.ledger.record(eval.calls).is_err() {
                    self.ledger.saturate();
                    return BatchScores {
                        scores,
                        error: Some(ScoreError::BudgetExhausted),
                    };
                }
                if let Some(c) = self.cache.as_mut() {
                    c.insert(key, eval.score);
                }
                scores.push(eval.score);
            }
            i = end;
        }
        BatchScores { scores, error: None }
    }

    fn cached(&mut self, p: &Prompt) -> Result<Option<f64>, ScoreError> {
        let Some(hit) = self.cache.as_ref().and_then(|c| c.get(&p.render())) else {
            return Ok(None);
        };
        if self.cached_hits_consume_budget && self.ledger.record(1).is_err() {
            return Err(ScoreError::BudgetExhausted);
        }
        Ok(Some(hit))
    }
}
