use indexmap::IndexSet;

use crate::edits::{enumerate_neighbors, EditKind, ParaphraseProvider};
use crate::error::ScoreError;
use crate::prompt::{Prompt, Segment};
use crate::scoring::Objective;

pub const DEFAULT_NODE_CAP: usize = 1_000_000;

/// Prompts reachable from an initial prompt, in discovery order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachableSet {
    prompts: IndexSet<Prompt>,
    depth: usize,
}

impl ReachableSet {
    pub fn len(&self) -> usize {
        self.prompts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prompts.is_empty()
    }

    pub fn contains(&self, p: &Prompt) -> bool {
        self.prompts.contains(p)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Prompt> {
        self.prompts.iter()
    }

    pub fn depth(&self) -> usize {
        self.depth
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("reachable set exceeded {cap} prompts at depth {depth}")]
pub struct NodeCapExceeded {
    pub cap: usize,
    pub depth: usize,
    /// Everything discovered before the cap was hit.
    pub partial: ReachableSet,
}

/// Edit settings the enumeration expands.
pub struct EnumerationConfig<'a> {
    pub ops: &'a [EditKind],
    /// Phrases available to `add` beyond the segments of discovered prompts.
    pub extra_phrases: &'a [Segment],
    pub provider: &'a mut dyn ParaphraseProvider,
    pub node_cap: usize,
}

/// Breadth-first closure of every edit outcome from `init`, `depth` levels
/// deep. The add pool at each level holds the extra phrases plus every
/// segment of every prompt discovered so far, which covers any pool a
/// search could have built from deletions along the way.
pub fn enumerate_reachable(
    init: &Prompt,
    cfg: EnumerationConfig<'_>,
    depth: usize,
) -> Result<ReachableSet, NodeCapExceeded> {
    let mut seen: IndexSet<Prompt> = IndexSet::new();
    seen.insert(init.clone());
    let mut pool: IndexSet<Segment> = cfg.extra_phrases.iter().cloned().collect();
    pool.extend(init.segments().iter().cloned());
    let mut frontier = vec![init.clone()];

    for level in 1..=depth {
        if frontier.is_empty() {
            break;
        }
        let snapshot: Vec<Segment> = pool.iter().cloned().collect();
        let mut next = Vec::new();
        for p in &frontier {
            for q in enumerate_neighbors(p, cfg.ops, &snapshot, cfg.provider) {
                if seen.contains(&q) {
                    continue;
                }
                if seen.len() >= cfg.node_cap {
                    return Err(NodeCapExceeded {
                        cap: cfg.node_cap,
                        depth: level,
                        partial: ReachableSet {
                            prompts: seen,
                            depth: level,
                        },
                    });
                }
                pool.extend(q.segments().iter().cloned());
                seen.insert(q.clone());
                next.push(q);
            }
        }
        frontier = next;
    }
    Ok(ReachableSet { prompts: seen, depth })
}

/// Exhaustive argmax over `set`; ties go to the first-discovered prompt.
/// Evaluates the objective directly, so no search budget is touched.
pub fn oracle_optimum(set: &ReachableSet, objective: &mut dyn Objective) -> Result<(Prompt, f64), ScoreError> {
    let mut best: Option<(&Prompt, f64)> = None;
    for p in set.iter() {
        let s = objective.evaluate(p)?.score;
        if best.is_none_or(|(_, b)| s > b) {
            best = Some((p, s));
        }
    }
    let (p, s) = best.ok_or(ScoreError::EmptyPrompt)?;
    Ok((p.clone(), s))
}
