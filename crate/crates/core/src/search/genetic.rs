use serde::{Deserialize, Serialize};

use super::{
    score_initial, update_result, zip_scores, SearchConfig, SearchContext, SearchOutcome, StopReason, Tracker,
};
use crate::candidate::{argmax, truncate_top, Candidate, Origin};
use crate::edits::crossover;
use crate::prompt::Prompt;
use crate::rng::RngStream;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaMutationParams {
    pub tournament_size: usize,
    /// Upper bound on the archive; `None` keeps every inserted candidate.
    pub archive_cap: Option<usize>,
}

impl Default for GaMutationParams {
    fn default() -> Self {
        Self {
            tournament_size: 3,
            archive_cap: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaCrossoverParams {
    pub population_size: usize,
    pub offspring: usize,
    pub mutation_rate: f64,
}

impl Default for GaCrossoverParams {
    fn default() -> Self {
        Self {
            population_size: 10,
            offspring: 5,
            mutation_rate: 0.5,
        }
    }
}

/// Draws `k` members with replacement and returns the index of the best;
/// ties go to the earliest-inserted member.
pub fn tournament_select(pool: &[Candidate], k: usize, rng: &mut RngStream) -> usize {
    assert!(!pool.is_empty() && k >= 1);
    let mut best = rng.below(pool.len());
    for _ in 1..k {
        let i = rng.below(pool.len());
        let (s, b) = (pool[i].score(), pool[best].score());
        if s > b || (s == b && i < best) {
            best = i;
        }
    }
    best
}

/// Removes the worst member other than the initial one at index 0.
fn evict_worst(archive: &mut Vec<Candidate>) {
    if let Some(i) = (1..archive.len()).min_by(|&a, &b| archive[a].score().total_cmp(&archive[b].score())) {
        archive.remove(i);
    }
}

/// Mutation-only genetic algorithm over an archive of scored prompts.
pub fn run_ga_mutation(
    init: &Prompt,
    cfg: &SearchConfig,
    params: &GaMutationParams,
    ctx: &mut SearchContext,
) -> SearchOutcome {
    let start = match score_initial(init, ctx) {
        Ok(c) => c,
        Err(out) => return *out,
    };
    let mut archive = vec![start.clone()];
    let mut tracker = Tracker::new(start);
    let mut rho = cfg.patience;

    for _ in 1..=cfg.max_iterations {
        let parent = archive[tournament_select(&archive, params.tournament_size, &mut ctx.rng.selection)]
            .prompt()
            .clone();
        let composed = ctx
            .editor
            .sample(&parent, cfg.candidates, cfg.num_compose, &mut ctx.rng.edits);
        let mut prompts = Vec::with_capacity(composed.len());
        let mut kinds = Vec::with_capacity(composed.len());
        for c in composed {
            ctx.editor.absorb(c.deleted);
            prompts.push(c.prompt);
            kinds.push(c.kinds);
        }
        let batch = ctx.scorer.score_batch(&prompts);
        if let Some(err) = batch.error {
            let partial = zip_scores(&prompts, &batch.scores);
            return tracker.halt(err, &parent, &partial, ctx.scorer.calls_used(), rho);
        }
        let k = argmax(&batch.scores, |s| *s).expect("at least one candidate");
        let best = Candidate::new(prompts[k].clone(), batch.scores[k], Origin::Edited(kinds[k].clone()));
        archive.push(best.clone());
        if params.archive_cap.is_some_and(|cap| archive.len() > cap) {
            evict_worst(&mut archive);
        }

        let upd = update_result(rho, cfg.patience, tracker.best().clone(), std::slice::from_ref(&best));
        rho = upd.patience_left;
        tracker.set_best(upd.result);
        tracker.record(
            best.prompt(),
            &zip_scores(&prompts, &batch.scores),
            ctx.scorer.calls_used(),
            rho,
        );
        if upd.stop {
            return tracker.finish(StopReason::Patience, ctx.scorer.calls_used());
        }
    }
    tracker.finish(StopReason::Iterations, ctx.scorer.calls_used())
}

/// Genetic algorithm with crossover: a fixed-size population, a crossover
/// phase and a mutation phase per generation, each followed by truncation
/// and a patience check.
pub fn run_ga_crossover(
    init: &Prompt,
    cfg: &SearchConfig,
    params: &GaCrossoverParams,
    ctx: &mut SearchContext,
) -> SearchOutcome {
    let start = match score_initial(init, ctx) {
        Ok(c) => c,
        Err(out) => return *out,
    };
    let mut population = vec![start.clone(); params.population_size];
    let mut tracker = Tracker::new(start);
    let mut rho = cfg.patience;

    for _ in 1..=cfg.max_iterations {
        let previous = population.clone();
        let mut scored: Vec<(Prompt, f64)> = Vec::new();

        for _ in 0..params.offspring {
            let a = tournament_select(&previous, 2, &mut ctx.rng.selection);
            let b = tournament_select(&previous, 2, &mut ctx.rng.selection);
            let child = crossover(previous[a].prompt(), previous[b].prompt(), &mut ctx.rng.selection);
            if population.iter().any(|c| c.prompt() == &child) {
                continue;
            }
            match ctx.scorer.score(&child) {
                Ok(s) => {
                    scored.push((child.clone(), s));
                    population.push(Candidate::new(child, s, Origin::Crossover));
                }
                Err(err) => {
                    let top = previous[0].prompt().clone();
                    return tracker.halt(err, &top, &scored, ctx.scorer.calls_used(), rho);
                }
            }
        }
        truncate_top(&mut population, params.population_size);
        let upd = update_result(rho, cfg.patience, tracker.best().clone(), &population);
        rho = upd.patience_left;
        tracker.set_best(upd.result);
        if upd.stop {
            tracker.record(population[0].prompt(), &scored, ctx.scorer.calls_used(), rho);
            return tracker.finish(StopReason::Patience, ctx.scorer.calls_used());
        }

        let mut mutants = Vec::new();
        let mut kinds = Vec::new();
        for member in &population {
            if params.mutation_rate >= ctx.rng.acceptance.unit() {
                let c = ctx
                    .editor
                    .sample(member.prompt(), 1, cfg.num_compose, &mut ctx.rng.edits)
                    .pop()
                    .expect("one sample requested");
                mutants.push(c.prompt);
                kinds.push(c.kinds);
                ctx.editor.absorb(c.deleted);
            }
        }
        let batch = ctx.scorer.score_batch(&mutants);
        scored.extend(zip_scores(&mutants, &batch.scores));
        if let Some(err) = batch.error {
            let top = population[0].prompt().clone();
            return tracker.halt(err, &top, &scored, ctx.scorer.calls_used(), rho);
        }
        for ((m, s), k) in mutants.into_iter().zip(batch.scores).zip(kinds) {
            population.push(Candidate::new(m, s, Origin::Edited(k)));
        }
        truncate_top(&mut population, params.population_size);
        let upd = update_result(rho, cfg.patience, tracker.best().clone(), &population);
        rho = upd.patience_left;
        tracker.set_best(upd.result);
        tracker.record(population[0].prompt(), &scored, ctx.scorer.calls_used(), rho);
        if upd.stop {
            return tracker.finish(StopReason::Patience, ctx.scorer.calls_used());
        }
    }
    tracker.finish(StopReason::Iterations, ctx.scorer.calls_used())
}
