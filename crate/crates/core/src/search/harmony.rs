use serde::{Deserialize, Serialize};

use super::{
    score_initial, update_result, zip_scores, Editor, SearchConfig, SearchContext, SearchOutcome, StopReason, Tracker,
};
use crate::candidate::{truncate_top, Candidate, Origin};
use crate::edits::{ComposeRange, Composed, EditKind};
use crate::prompt::Prompt;
use crate::rng::RunRng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmonyParams {
    pub memory_size: usize,
    /// Number of slices `k_s` each candidate is assembled from.
    pub segments: usize,
    pub hmcr: f64,
    pub par: f64,
}

impl Default for HarmonyParams {
    fn default() -> Self {
        Self {
            memory_size: 10,
            segments: 5,
            hmcr: 0.4,
            par: 0.5,
        }
    }
}

fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

/// 0-based inclusive bounds of slice `j` (1-based) when a prompt of length
/// `len` is cut into `min(k_s, len)` slices. `None` when `j` is out of range
/// after that clamp.
pub fn harmony_segment_bounds(j: usize, k_s: usize, len: usize) -> Option<(usize, usize)> {
    let k = k_s.min(len);
    if j == 0 || j > k {
        return None;
    }
    let start = ceil_div((j - 1) * len, k);
    let end = ceil_div(j * len, k) - 1;
    Some((start, end))
}

/// Assembles one candidate from memory slices. Slice `j` comes from a
/// uniformly drawn memory prompt; with probability `hmcr` it is kept, and
/// then with probability `par` paraphrased; otherwise it gets a composed
/// edit from the full operator set. The slice count is clamped to the
/// shortest memory prompt so every slice index exists in every prompt.
pub fn harmony_generate_candidate(
    memory: &[Candidate],
    params: &HarmonyParams,
    compose: ComposeRange,
    editor: &mut Editor,
    rng: &mut RunRng,
) -> Composed {
    assert!(!memory.is_empty(), "harmony memory is empty");
    let shortest = memory.iter().map(|c| c.prompt().len()).min().unwrap_or(0);
    let k = params.segments.min(shortest);
    let full: Vec<EditKind> = editor.ops().to_vec();
    let mut segments = Vec::new();
    let mut deleted = Vec::new();
    let mut kinds = Vec::new();
    for j in 1..=k {
        let source = memory[rng.selection.below(memory.len())].prompt();
        let (start, end) = harmony_segment_bounds(j, k, source.len()).expect("k <= every memory length");
        let slice = Prompt::new(source.segments()[start..=end].to_vec());
        let ops: Option<&[EditKind]> = if params.hmcr >= rng.acceptance.unit() {
            (params.par >= rng.acceptance.unit()).then_some(&EditKind::SMALL[..])
        } else {
            Some(&full[..])
        };
        let piece = match ops {
            Some(ops) => {
                let c = editor.sample_with(&slice, ops, compose, &mut rng.edits);
                deleted.extend(c.deleted);
                kinds.extend(c.kinds);
                c.prompt
            }
            None => slice,
        };
        segments.extend(piece.into_segments());
    }
    let prompt = if segments.is_empty() {
        memory[0].prompt().clone()
    } else {
        Prompt::new(segments)
    };
    Composed { prompt, deleted, kinds }
}

/// Harmony search over a memory of the best prompts seen so far.
pub fn run_harmony(
    init: &Prompt,
    cfg: &SearchConfig,
    params: &HarmonyParams,
    ctx: &mut SearchContext,
) -> SearchOutcome {
    let start = match score_initial(init, ctx) {
        Ok(c) => c,
        Err(out) => return *out,
    };
    let mut memory = vec![start.clone()];
    let mut tracker = Tracker::new(start);
    let mut rho = cfg.patience;

    for _ in 1..=cfg.max_iterations {
        let mut prompts = Vec::with_capacity(cfg.candidates);
        let mut kinds = Vec::with_capacity(cfg.candidates);
        let mut deleted = Vec::new();
        for _ in 0..cfg.candidates {
            let c = harmony_generate_candidate(&memory, params, cfg.num_compose, &mut ctx.editor, &mut ctx.rng);
            prompts.push(c.prompt);
            kinds.push(c.kinds);
            deleted.extend(c.deleted);
        }
        ctx.editor.absorb(deleted);
        let batch = ctx.scorer.score_batch(&prompts);
        if let Some(err) = batch.error {
            let partial = zip_scores(&prompts, &batch.scores);
            return tracker.halt(err, memory[0].prompt(), &partial, ctx.scorer.calls_used(), rho);
        }
        let fresh: Vec<Candidate> = prompts
            .iter()
            .zip(&batch.scores)
            .map(|(p, s)| Candidate::new(p.clone(), *s, Origin::Harmony))
            .collect();

        let upd = update_result(rho, cfg.patience, tracker.best().clone(), &fresh);
        rho = upd.patience_left;
        tracker.set_best(upd.result);
        for c in fresh {
            if !memory.iter().any(|m| m.prompt() == c.prompt()) {
                memory.push(c);
            }
        }
        truncate_top(&mut memory, params.memory_size);
        tracker.record(
            memory[0].prompt(),
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
