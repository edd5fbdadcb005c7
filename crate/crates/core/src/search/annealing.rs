use super::schedule::{accept_worse, TemperatureSchedule};
use super::{score_initial, zip_scores, Neighborhood, SearchConfig, SearchContext, SearchOutcome, StopReason, Tracker};
use crate::candidate::{argmax, Candidate, Origin};
use crate::edits::EditKind;
use crate::prompt::Prompt;

/// Greedy search: adopt the best candidate only when it beats the base.
pub fn run_hill_climbing(init: &Prompt, cfg: &SearchConfig, ctx: &mut SearchContext) -> SearchOutcome {
    run_local(init, cfg, None, ctx)
}

/// Hill climbing that may also adopt a worse candidate with probability
/// `exp((s_best - s_base) / T(i))`. At `T(i) = 0` no draw is taken, so a
/// zero schedule replays hill climbing exactly.
pub fn run_simulated_annealing(
    init: &Prompt,
    cfg: &SearchConfig,
    schedule: &TemperatureSchedule,
    ctx: &mut SearchContext,
) -> SearchOutcome {
    run_local(init, cfg, Some(schedule), ctx)
}

fn neighborhood(base: &Prompt, cfg: &SearchConfig, ctx: &mut SearchContext) -> (Vec<Prompt>, Vec<Vec<EditKind>>) {
    match cfg.neighborhood {
        Neighborhood::Sampled => {
            let composed = ctx
                .editor
                .sample(base, cfg.candidates, cfg.num_compose, &mut ctx.rng.edits);
            let mut prompts = Vec::with_capacity(composed.len());
            let mut kinds = Vec::with_capacity(composed.len());
            for c in composed {
                ctx.editor.absorb(c.deleted);
                prompts.push(c.prompt);
                kinds.push(c.kinds);
            }
            (prompts, kinds)
        }
        Neighborhood::Exhaustive => {
            let prompts = ctx.editor.neighbors(base);
            let kinds = vec![Vec::new(); prompts.len()];
            (prompts, kinds)
        }
    }
}

fn run_local(
    init: &Prompt,
    cfg: &SearchConfig,
    schedule: Option<&TemperatureSchedule>,
    ctx: &mut SearchContext,
) -> SearchOutcome {
    let start = match score_initial(init, ctx) {
        Ok(c) => c,
        Err(out) => return *out,
    };
    let mut base = start.clone();
    let mut tracker = Tracker::new(start);
    let mut rho = cfg.patience;

    for i in 1..=cfg.max_iterations {
        let (prompts, kinds) = neighborhood(base.prompt(), cfg, ctx);
        let batch = ctx.scorer.score_batch(&prompts);
        if let Some(err) = batch.error {
            let partial = zip_scores(&prompts, &batch.scores);
            return tracker.halt(err, base.prompt(), &partial, ctx.scorer.calls_used(), rho);
        }
        let scored = zip_scores(&prompts, &batch.scores);

        let mut stop = false;
        if let Some(k) = argmax(&batch.scores, |s| *s) {
            let s_best = batch.scores[k];
            let improved = s_best > base.score();
            let adopt = improved
                || schedule.is_some_and(|t| {
                    let acceptance = &mut ctx.rng.acceptance;
                    accept_worse(s_best - base.score(), t.temperature(i), || acceptance.unit())
                });
            if adopt {
                base = Candidate::new(prompts[k].clone(), s_best, Origin::Edited(kinds[k].clone()));
                tracker.offer(base.prompt(), s_best, base.origin().clone());
                rho = cfg.patience;
            } else if rho > 0 {
                rho -= 1;
            } else {
                stop = true;
            }
        } else if rho > 0 {
            rho -= 1;
        } else {
            stop = true;
        }

        tracker.record(base.prompt(), &scored, ctx.scorer.calls_used(), rho);
        if stop {
            return tracker.finish(StopReason::Patience, ctx.scorer.calls_used());
        }
    }
    tracker.finish(StopReason::Iterations, ctx.scorer.calls_used())
}
