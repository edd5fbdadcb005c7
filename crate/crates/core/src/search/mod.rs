//! The six search algorithms and their shared machinery.
//!
//! Every algorithm takes an initial prompt, a [`SearchConfig`], its own
//! parameter block and a [`SearchContext`] (scorer, editor, random streams),
//! and returns a [`SearchOutcome`] whose trace has one record per executed
//! iteration.

mod annealing;
mod genetic;
mod harmony;
mod schedule;
mod tabu;
mod trace;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::candidate::{argmax, Candidate, Origin};
use crate::edits::{
    enumerate_neighbors, sample_neighborhood, ComposeRange, Composed, EditKind, ParaphraseProvider, PhrasePool,
};
use crate::error::ScoreError;
use crate::prompt::{Prompt, Segment};
use crate::rng::{RngStream, RunRng};
use crate::scoring::Scorer;

pub use annealing::{run_hill_climbing, run_simulated_annealing};
pub use genetic::{run_ga_crossover, run_ga_mutation, tournament_select, GaCrossoverParams, GaMutationParams};
pub use harmony::{harmony_generate_candidate, harmony_segment_bounds, run_harmony, HarmonyParams};
pub use schedule::{default_temperature, TemperatureSchedule};
pub use tabu::{run_tabu, tabu_predicate, TabuList, TabuParams, TabuVerdict};
pub use trace::{IterationRecord, SearchTrace, StopReason, TraceCandidate};

/// The six algorithm ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "hc")]
    HillClimbing,
    #[serde(rename = "sa")]
    SimulatedAnnealing,
    #[serde(rename = "ga-m")]
    GaMutation,
    #[serde(rename = "ga-c")]
    GaCrossover,
    #[serde(rename = "ts")]
    Tabu,
    #[serde(rename = "hs")]
    Harmony,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::HillClimbing,
        Algorithm::SimulatedAnnealing,
        Algorithm::GaMutation,
        Algorithm::GaCrossover,
        Algorithm::Tabu,
        Algorithm::Harmony,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Algorithm::HillClimbing => "hc",
            Algorithm::SimulatedAnnealing => "sa",
            Algorithm::GaMutation => "ga-m",
            Algorithm::GaCrossover => "ga-c",
            Algorithm::Tabu => "ts",
            Algorithm::Harmony => "hs",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.id() == s)
            .ok_or_else(|| format!("unknown algorithm `{s}` (expected one of hc, sa, ga-m, ga-c, ts, hs)"))
    }
}

/// How hill climbing and annealing build each iteration's candidates.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Neighborhood {
    /// `candidates` independent composed edits.
    #[default]
    Sampled,
    /// Every single-edit neighbor of the base.
    Exhaustive,
}

/// Settings shared by every algorithm.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub max_iterations: usize,
    /// Candidates per iteration (`m`, or `k` for harmony search).
    pub candidates: usize,
    pub num_compose: ComposeRange,
    pub patience: usize,
    pub neighborhood: Neighborhood,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            max_iterations: 50,
            candidates: 5,
            num_compose: ComposeRange::default(),
            patience: 7,
            neighborhood: Neighborhood::Sampled,
        }
    }
}

/// Operator set, phrase pool and paraphrase source.
pub struct Editor {
    ops: Vec<EditKind>,
    pool: PhrasePool,
    provider: Box<dyn ParaphraseProvider>,
}

impl fmt::Debug for Editor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Editor")
            .field("ops", &self.ops)
            .field("pool", &self.pool.len())
            .finish()
    }
}

impl Editor {
    pub fn new(ops: Vec<EditKind>, pool: PhrasePool, provider: Box<dyn ParaphraseProvider>) -> Self {
        Self { ops, pool, provider }
    }

    pub fn ops(&self) -> &[EditKind] {
        &self.ops
    }

    pub fn pool(&self) -> &PhrasePool {
        &self.pool
    }

    pub fn provider(&mut self) -> &mut dyn ParaphraseProvider {
        self.provider.as_mut()
    }

    /// `m` composed edits of `base` using the editor's operator set.
    pub fn sample(&mut self, base: &Prompt, m: usize, compose: ComposeRange, rng: &mut RngStream) -> Vec<Composed> {
        sample_neighborhood(base, m, compose, &self.ops, &self.pool, self.provider.as_mut(), rng)
    }

    /// Like [`Editor::sample`] with an explicit operator set.
    pub fn sample_with(
        &mut self,
        base: &Prompt,
        ops: &[EditKind],
        compose: ComposeRange,
        rng: &mut RngStream,
    ) -> Composed {
        sample_neighborhood(base, 1, compose, ops, &self.pool, self.provider.as_mut(), rng)
            .pop()
            .expect("one sample requested")
    }

    /// All single-edit neighbors of `base`.
    pub fn neighbors(&mut self, base: &Prompt) -> Vec<Prompt> {
        let pool = self.pool.distinct();
        enumerate_neighbors(base, &self.ops, &pool, self.provider.as_mut())
    }

    /// Moves deleted segments into the pool.
    pub fn absorb(&mut self, deleted: impl IntoIterator<Item = Segment>) {
        self.pool.extend(deleted);
    }
}

/// Everything an algorithm mutates during a run.
#[derive(Debug)]
pub struct SearchContext {
    pub scorer: Scorer,
    pub editor: Editor,
    pub rng: RunRng,
}

impl SearchContext {
    pub fn new(scorer: Scorer, editor: Editor, seed: u64) -> Self {
        Self {
            scorer,
            editor,
            rng: RunRng::new(seed),
        }
    }
}

/// Final prompt plus the full trace.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub result: Prompt,
    pub trace: SearchTrace,
    /// Set when the run stopped on a scoring failure.
    pub error: Option<ScoreError>,
    /// Scorer calls charged to the budget, initial scoring included.
    pub calls_used: u64,
}

impl SearchOutcome {
    pub fn result_score(&self) -> Option<f64> {
        self.trace.result_score
    }

    pub fn stop_reason(&self) -> StopReason {
        self.trace.stop_reason
    }
}

/// Outcome of one patience check.
#[derive(Debug, Clone, PartialEq)]
pub struct UpdateResult {
    pub patience_left: usize,
    pub result: Candidate,
    pub stop: bool,
}

/// Patience bookkeeping against the best result so far: a strictly better
/// pool best replaces `result` and refreshes patience; otherwise patience
/// is decremented, and when already zero the run should stop.
///
/// Panics on an empty pool.
pub fn update_result(patience_left: usize, patience: usize, result: Candidate, pool: &[Candidate]) -> UpdateResult {
    let best = &pool[argmax(pool, Candidate::score).expect("pool must be non-empty")];
    if best.score() > result.score() {
        UpdateResult {
            patience_left: patience,
            result: best.clone(),
            stop: false,
        }
    } else if patience_left > 0 {
        UpdateResult {
            patience_left: patience_left - 1,
            result,
            stop: false,
        }
    } else {
        UpdateResult {
            patience_left,
            result,
            stop: true,
        }
    }
}

/// Runs `algorithm` with its parameter block.
pub fn run_algorithm(
    algorithm: Algorithm,
    init: &Prompt,
    cfg: &SearchConfig,
    params: &AlgorithmParams,
    ctx: &mut SearchContext,
) -> SearchOutcome {
    match algorithm {
        Algorithm::HillClimbing => run_hill_climbing(init, cfg, ctx),
        Algorithm::SimulatedAnnealing => run_simulated_annealing(init, cfg, &params.schedule, ctx),
        Algorithm::GaMutation => run_ga_mutation(init, cfg, &params.ga_mutation, ctx),
        Algorithm::GaCrossover => run_ga_crossover(init, cfg, &params.ga_crossover, ctx),
        Algorithm::Tabu => run_tabu(init, cfg, &params.tabu, ctx),
        Algorithm::Harmony => run_harmony(init, cfg, &params.harmony, ctx),
    }
}

/// Parameter blocks for every algorithm; only the selected one is read.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AlgorithmParams {
    pub schedule: TemperatureSchedule,
    pub ga_mutation: GaMutationParams,
    pub ga_crossover: GaCrossoverParams,
    pub tabu: TabuParams,
    pub harmony: HarmonyParams,
}

/// Best-so-far bookkeeping and trace records for one run.
pub(crate) struct Tracker {
    records: Vec<IterationRecord>,
    best: Candidate,
}

impl Tracker {
    pub(crate) fn new(init: Candidate) -> Self {
        Self {
            records: Vec::new(),
            best: init,
        }
    }

    pub(crate) fn best(&self) -> &Candidate {
        &self.best
    }

    pub(crate) fn set_best(&mut self, c: Candidate) {
        self.best = c;
    }

    /// Replaces the best if `score` is strictly higher.
    pub(crate) fn offer(&mut self, prompt: &Prompt, score: f64, origin: Origin) -> bool {
        if score > self.best.score() {
            self.best = Candidate::new(prompt.clone(), score, origin);
            true
        } else {
            false
        }
    }

    pub(crate) fn record(
        &mut self,
        accepted: &Prompt,
        candidates: &[(Prompt, f64)],
        budget_used: u64,
        patience: usize,
    ) {
        self.records.push(IterationRecord {
            iter: self.records.len() + 1,
            best_score: self.best.score(),
            accepted: accepted.render(),
            candidates: candidates
                .iter()
                .map(|(p, s)| TraceCandidate {
                    prompt: p.render(),
                    score: *s,
                })
                .collect(),
            budget_used,
            patience,
        });
    }

    pub(crate) fn finish(self, reason: StopReason, calls_used: u64) -> SearchOutcome {
        let result = self.best.prompt().clone();
        SearchOutcome {
            calls_used,
            trace: SearchTrace {
                records: self.records,
                result: result.render(),
                result_score: Some(self.best.score()),
                stop_reason: reason,
            },
            result,
            error: None,
        }
    }

    /// Ends a run interrupted by `error` after `partial` candidates of the
    /// current iteration were scored. Partial scores still count towards the
    /// best result, and the partial iteration is recorded.
    pub(crate) fn halt(
        mut self,
        error: ScoreError,
        accepted: &Prompt,
        partial: &[(Prompt, f64)],
        budget_used: u64,
        patience: usize,
    ) -> SearchOutcome {
        for (p, s) in partial {
            self.offer(p, *s, Origin::Edited(Vec::new()));
        }
        self.record(accepted, partial, budget_used, patience);
        let reason = stop_reason_for(&error);
        let mut out = self.finish(reason, budget_used);
        if reason == StopReason::Error {
            out.error = Some(error);
        }
        out
    }
}

fn stop_reason_for(error: &ScoreError) -> StopReason {
    match error {
        ScoreError::BudgetExhausted => StopReason::Budget,
        _ => StopReason::Error,
    }
}

/// Scores the initial prompt, or builds the zero-iteration outcome when that
/// fails.
pub(crate) fn score_initial(init: &Prompt, ctx: &mut SearchContext) -> Result<Candidate, Box<SearchOutcome>> {
    match ctx.scorer.score(init) {
        Ok(s) => Ok(Candidate::new(init.clone(), s, Origin::Initial)),
        Err(e) => {
            let reason = stop_reason_for(&e);
            Err(Box::new(SearchOutcome {
                calls_used: ctx.scorer.calls_used(),
                result: init.clone(),
                trace: SearchTrace {
                    records: Vec::new(),
                    result: init.render(),
                    result_score: None,
                    stop_reason: reason,
                },
                error: (reason == StopReason::Error).then_some(e),
            }))
        }
    }
}

/// Pairs prompts with their scores, truncated to the shorter list.
pub(crate) fn zip_scores(prompts: &[Prompt], scores: &[f64]) -> Vec<(Prompt, f64)> {
    prompts.iter().cloned().zip(scores.iter().copied()).collect()
}
