//! Deterministic in-process objectives.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use super::{Evaluation, Objective};
use crate::error::ScoreError;
use crate::prompt::{Prompt, Segment};

/// Fraction of `targets` that appear among the prompt's tokens. Repeated
/// tokens count once.
pub fn score_keyword(p: &Prompt, targets: &BTreeSet<String>) -> f64 {
    if targets.is_empty() {
        return 0.0;
    }
    let present: HashSet<&str> = p.tokens().collect();
    let hits = targets.iter().filter(|t| present.contains(t.as_str())).count();
    hits as f64 / targets.len() as f64
}

/// Levenshtein distance over whole segments.
pub fn segment_distance(a: &[Segment], b: &[Segment]) -> usize {
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, sa) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, sb) in b.iter().enumerate() {
            let subst = prev[j] + usize::from(sa != sb);
            cur[j + 1] = subst.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// `1 - D / max(|p|, |target|)` with `D` the segment-level edit distance,
/// clamped to `[0, 1]`.
pub fn score_target_distance(p: &Prompt, target: &Prompt) -> f64 {
    let max_len = p.len().max(target.len());
    if max_len == 0 {
        return 1.0;
    }
    let d = segment_distance(p.segments(), target.segments());
    (1.0 - d as f64 / max_len as f64).clamp(0.0, 1.0)
}

/// Fraction of `predictions` equal to the example labels.
pub fn accuracy(predictions: &[String], examples: &[Example]) -> f64 {
    if examples.is_empty() {
        return 0.0;
    }
    let correct = predictions.iter().zip(examples).filter(|(p, e)| **p == e.label).count();
    correct as f64 / examples.len() as f64
}

/// One labelled item of a score set.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Example {
    pub input: String,
    pub label: String,
}

#[derive(Debug, Clone)]
pub struct KeywordObjective {
    targets: BTreeSet<String>,
}

impl KeywordObjective {
    pub fn new<I, S>(targets: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            targets: targets.into_iter().map(Into::into).collect(),
        }
    }

    pub fn targets(&self) -> &BTreeSet<String> {
        &self.targets
    }
}

impl Objective for KeywordObjective {
    fn evaluate(&mut self, p: &Prompt) -> Result<Evaluation, ScoreError> {
        Ok(Evaluation::local(score_keyword(p, &self.targets)))
    }
}

#[derive(Debug, Clone)]
pub struct TargetDistanceObjective {
    target: Prompt,
}

impl TargetDistanceObjective {
    pub fn new(target: Prompt) -> Self {
        Self { target }
    }
}

impl Objective for TargetDistanceObjective {
    fn evaluate(&mut self, p: &Prompt) -> Result<Evaluation, ScoreError> {
        Ok(Evaluation::local(score_target_distance(p, &self.target)))
    }
}

/// Scores looked up by rendered prompt; unknown prompts get `default`.
#[derive(Debug, Clone)]
pub struct TableObjective {
    table: BTreeMap<String, f64>,
    default: f64,
}

impl TableObjective {
    pub fn new(table: BTreeMap<String, f64>, default: f64) -> Self {
        Self { table, default }
    }
}

impl Objective for TableObjective {
    fn evaluate(&mut self, p: &Prompt) -> Result<Evaluation, ScoreError> {
        let s = self.table.get(&p.render()).copied().unwrap_or(self.default);
        Ok(Evaluation::local(s))
    }
}

/// Accuracy of a local predictor over a score set.
pub struct AccuracyObjective<F> {
    examples: Vec<Example>,
    predict: F,
}

impl<F: FnMut(&Prompt, &str) -> String> AccuracyObjective<F> {
    pub fn new(examples: Vec<Example>, predict: F) -> Self {
        Self { examples, predict }
    }
}

impl<F: FnMut(&Prompt, &str) -> String> Objective for AccuracyObjective<F> {
    fn evaluate(&mut self, p: &Prompt) -> Result<Evaluation, ScoreError> {
        let preds: Vec<String> = self.examples.iter().map(|e| (self.predict)(p, &e.input)).collect();
        Ok(Evaluation::local(accuracy(&preds, &self.examples)))
    }
}
