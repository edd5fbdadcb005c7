use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{
    score_initial, update_result, zip_scores, SearchConfig, SearchContext, SearchOutcome, StopReason, Tracker,
};
use crate::candidate::{argmax, Candidate, Origin};
use crate::prompt::Prompt;
use crate::rng::RngStream;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TabuParams {
    pub tabu_size: usize,
    /// Probability that a tabu candidate is admitted anyway.
    pub aspiration: f64,
}

impl Default for TabuParams {
    fn default() -> Self {
        Self {
            tabu_size: 5,
            aspiration: 0.1,
        }
    }
}

/// FIFO of rendered prompts with a fixed capacity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TabuList {
    capacity: usize,
    entries: VecDeque<String>,
}

impl TabuList {
    /// Panics if `capacity == 0`.
    pub fn new(capacity: usize) -> Self {
        assert!(capacity >= 1, "tabu list needs room for one entry");
        Self {
            capacity,
            entries: VecDeque::with_capacity(capacity + 1),
        }
    }

    pub fn push(&mut self, p: &Prompt) {
        self.entries.push_back(p.render());
        while self.entries.len() > self.capacity {
            self.entries.pop_front();
        }
    }

    pub fn contains(&self, p: &Prompt) -> bool {
        let key = p.render();
        self.entries.iter().any(|e| *e == key)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Oldest first.
    pub fn entries(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(String::as_str)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TabuVerdict {
    Allowed,
    Blocked,
}

/// Tabu members are admitted with probability `aspiration`; a draw is taken
/// only for members.
pub fn tabu_predicate(list: &TabuList, c: &Prompt, aspiration: f64, rng: &mut RngStream) -> TabuVerdict {
    if !list.contains(c) || aspiration >= rng.unit() {
        TabuVerdict::Allowed
    } else {
        TabuVerdict::Blocked
    }
}

/// Tabu search: move to the best candidate the tabu list admits, even when
/// it is worse than the current base.
pub fn run_tabu(init: &Prompt, cfg: &SearchConfig, params: &TabuParams, ctx: &mut SearchContext) -> SearchOutcome {
    let start = match score_initial(init, ctx) {
        Ok(c) => c,
        Err(out) => return *out,
    };
    let mut list = TabuList::new(params.tabu_size);
    list.push(init);
    let mut base = start.clone();
    let mut tracker = Tracker::new(start);
    let mut rho = cfg.patience;

    for _ in 1..=cfg.max_iterations {
        let composed = ctx
            .editor
            .sample(base.prompt(), cfg.candidates, cfg.num_compose, &mut ctx.rng.edits);
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
            return tracker.halt(err, base.prompt(), &partial, ctx.scorer.calls_used(), rho);
        }

        let allowed: Vec<usize> = (0..prompts.len())
            .filter(|&j| {
                tabu_predicate(&list, &prompts[j], params.aspiration, &mut ctx.rng.acceptance) == TabuVerdict::Allowed
            })
            .collect();
        let stop = match argmax(&allowed, |&j| batch.scores[j]) {
            Some(a) => {
                let k = allowed[a];
                base = Candidate::new(prompts[k].clone(), batch.scores[k], Origin::Edited(kinds[k].clone()));
                list.push(base.prompt());
                let upd = update_result(rho, cfg.patience, tracker.best().clone(), std::slice::from_ref(&base));
                rho = upd.patience_left;
                tracker.set_best(upd.result);
                upd.stop
            }
            None if rho > 0 => {
                rho -= 1;
                false
            }
            None => true,
        };
        tracker.record(
            base.prompt(),
            &zip_scores(&prompts, &batch.scores),
            ctx.scorer.calls_used(),
            rho,
        );
        if stop {
            return tracker.finish(StopReason::Patience, ctx.scorer.calls_used());
        }
    }
    tracker.finish(StopReason::Iterations, ctx.scorer.calls_used())
}
