use super::{ComposeRange, EditKind, ParaphraseProvider, PhrasePool};
use crate::prompt::{Prompt, Segment};
use crate::rng::RngStream;

/// The chosen operator cannot act on this prompt.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Infeasible(pub EditKind);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EditOutcome {
    pub prompt: Prompt,
    /// Segment removed by a delete; the caller moves it into the pool.
    pub deleted: Option<Segment>,
}

/// Result of a composed edit sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Composed {
    pub prompt: Prompt,
    pub deleted: Vec<Segment>,
    /// Operators that were actually applied, in order.
    pub kinds: Vec<EditKind>,
}

pub(crate) fn delete_at(p: &Prompt, i: usize) -> (Prompt, Segment) {
    let mut segs = p.segments().to_vec();
    let removed = segs.remove(i);
    (Prompt::new(segs), removed)
}

pub(crate) fn insert_at(p: &Prompt, i: usize, seg: Segment) -> Prompt {
    let mut segs = p.segments().to_vec();
    segs.insert(i, seg);
    Prompt::new(segs)
}

pub(crate) fn swap_at(p: &Prompt, i: usize, j: usize) -> Prompt {
    let mut segs = p.segments().to_vec();
    segs.swap(i, j);
    Prompt::new(segs)
}

pub(crate) fn replace_at(p: &Prompt, i: usize, seg: Segment) -> Prompt {
    let mut segs = p.segments().to_vec();
    segs[i] = seg;
    Prompt::new(segs)
}

/// Applies one operator with uniformly drawn positions.
///
/// Paraphrase picks uniformly among the segments that have at least one
/// alternative, then uniformly among that segment's alternatives.
pub fn apply_edit(
    p: &Prompt,
    kind: EditKind,
    pool: &PhrasePool,
    provider: &mut dyn ParaphraseProvider,
    rng: &mut RngStream,
) -> Result<EditOutcome, Infeasible> {
    let len = p.len();
    let unchanged = |prompt| EditOutcome { prompt, deleted: None };
    match kind {
        EditKind::Delete => {
            if len < 2 {
                return Err(Infeasible(kind));
            }
            let (prompt, removed) = delete_at(p, rng.below(len));
            Ok(EditOutcome {
                prompt,
                deleted: Some(removed),
            })
        }
        EditKind::Add => {
            if pool.is_empty() {
                return Err(Infeasible(kind));
            }
            let seg = pool.get(rng.below(pool.len())).clone();
            let pos = rng.below(len + 1);
            Ok(unchanged(insert_at(p, pos, seg)))
        }
        EditKind::Swap => {
            if len < 2 {
                return Err(Infeasible(kind));
            }
            let (i, j) = rng.distinct_pair(len);
            Ok(unchanged(swap_at(p, i, j)))
        }
        EditKind::Paraphrase => {
            let options: Vec<(usize, Vec<Segment>)> = p
                .segments()
                .iter()
                .enumerate()
                .map(|(i, s)| (i, provider.alternatives(s)))
                .filter(|(_, alts)| !alts.is_empty())
                .collect();
            if options.is_empty() {
                return Err(Infeasible(kind));
            }
            let (i, alts) = &options[rng.below(options.len())];
            let alt = alts[rng.below(alts.len())].clone();
            Ok(unchanged(replace_at(p, *i, alt)))
        }
    }
}

/// Applies `l` sequentially sampled edits. An infeasible kind is set aside
/// and another drawn from the rest; if every kind is infeasible at some step
/// the prompt accumulated so far is returned.
pub fn compose_edits(
    p: &Prompt,
    l: usize,
    ops: &[EditKind],
    pool: &PhrasePool,
    provider: &mut dyn ParaphraseProvider,
    rng: &mut RngStream,
) -> Composed {
    let mut current = p.clone();
    let mut deleted = Vec::new();
    let mut kinds = Vec::new();
    'steps: for _ in 0..l {
        let mut remaining: Vec<EditKind> = ops.to_vec();
        while !remaining.is_empty() {
            let kind = remaining.remove(rng.below(remaining.len()));
            if let Ok(out) = apply_edit(&current, kind, pool, provider, rng) {
                current = out.prompt;
                deleted.extend(out.deleted);
                kinds.push(kind);
                continue 'steps;
            }
        }
        break;
    }
    Composed {
        prompt: current,
        deleted,
        kinds,
    }
}

/// Draws `m` independent composed edits of `base`.
pub fn sample_neighborhood(
    base: &Prompt,
    m: usize,
    compose: ComposeRange,
    ops: &[EditKind],
    pool: &PhrasePool,
    provider: &mut dyn ParaphraseProvider,
    rng: &mut RngStream,
) -> Vec<Composed> {
    (0..m)
        .map(|_| {
            let l = if compose.min == compose.max {
                compose.min
            } else {
                rng.between(compose.min, compose.max)
            };
            compose_edits(base, l, ops, pool, provider, rng)
        })
        .collect()
}

/// Offspring for a given split point: the first `min(split, L1)` segments
/// of `p1` followed by `p2` from position `split` on. An empty offspring is
/// replaced by `p1`.
pub fn crossover_at(p1: &Prompt, p2: &Prompt, split: usize) -> Prompt {
    let a = p1.segments();
    let b = p2.segments();
    let mut segs: Vec<Segment> = a[..split.min(a.len())].to_vec();
    segs.extend_from_slice(&b[split.min(b.len())..]);
    if segs.is_empty() {
        p1.clone()
    } else {
        Prompt::new(segs)
    }
}

/// One-point crossover with `split` uniform in `0..=max(L1, L2)`.
pub fn crossover(p1: &Prompt, p2: &Prompt, rng: &mut RngStream) -> Prompt {
    let split = rng.below(p1.len().max(p2.len()) + 1);
    crossover_at(p1, p2, split)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edits::{NoParaphrase, StaticParaphraseTable};
    use crate::rng::EDITS;
    use proptest::prelude::*;

    fn p(parts: &[&str]) -> Prompt {
        Prompt::from_phrases(parts).unwrap()
    }

    fn rng() -> RngStream {
        RngStream::new(11, EDITS)
    }

    #[test]
    fn paraphrase_single_option() {
        let mut table = StaticParaphraseTable::from_entries([("think", vec!["brainstorm"])]);
        let out = apply_edit(
            &p(&["Let", "us", "think"]),
            EditKind::Paraphrase,
            &PhrasePool::new(),
            &mut table,
            &mut rng(),
        )
        .unwrap();
        assert_eq!(out.prompt, p(&["Let", "us", "brainstorm"]));
        assert_eq!(out.deleted, None);
    }

    #[test]
    fn positional_primitives() {
        assert_eq!(swap_at(&p(&["A", "B"]), 0, 1), p(&["B", "A"]));
        let (rest, gone) = delete_at(&p(&["A", "B", "C"]), 1);
        assert_eq!(rest, p(&["A", "C"]));
        assert_eq!(gone.render(), "B");
        assert_eq!(insert_at(&p(&["A"]), 1, Segment::parse("Z").unwrap()), p(&["A", "Z"]));
    }

    #[test]
    fn delete_then_swap_trace() {
        let (after_delete, _) = delete_at(&p(&["A", "B", "C"]), 1);
        assert_eq!(swap_at(&after_delete, 0, 1), p(&["C", "A"]));
    }

    #[test]
    fn swap_of_two_always_exchanges() {
        let mut r = rng();
        for _ in 0..20 {
            let out = apply_edit(
                &p(&["A", "B"]),
                EditKind::Swap,
                &PhrasePool::new(),
                &mut NoParaphrase,
                &mut r,
            )
            .unwrap();
            assert_eq!(out.prompt, p(&["B", "A"]));
        }
    }

    #[test]
    fn delete_reports_removed_segment() {
        let mut r = rng();
        let base = p(&["A", "B", "C"]);
        let out = apply_edit(&base, EditKind::Delete, &PhrasePool::new(), &mut NoParaphrase, &mut r).unwrap();
        let gone = out.deleted.unwrap();
        assert_eq!(out.prompt.len(), 2);
        assert!(base.segments().contains(&gone));
        assert!(!out.prompt.segments().contains(&gone));
    }

    #[test]
    fn infeasible_operators() {
        let single = p(&["A"]);
        let empty_pool = PhrasePool::new();
        let mut r = rng();
        for kind in [EditKind::Delete, EditKind::Swap, EditKind::Add, EditKind::Paraphrase] {
            assert_eq!(
                apply_edit(&single, kind, &empty_pool, &mut NoParaphrase, &mut r),
                Err(Infeasible(kind))
            );
        }
    }

    #[test]
    fn compose_of_one_matches_apply() {
        let base = p(&["A", "B", "C"]);
        let pool = PhrasePool::from_inventory(&base, []);
        let ops = [EditKind::Swap];
        let mut r1 = rng();
        let mut r2 = rng();
        let composed = compose_edits(&base, 1, &ops, &pool, &mut NoParaphrase, &mut r1);
        // compose draws the kind index first (one option: still one draw).
        r2.below(1);
        let single = apply_edit(&base, EditKind::Swap, &pool, &mut NoParaphrase, &mut r2).unwrap();
        assert_eq!(composed.prompt, single.prompt);
        assert_eq!(composed.kinds, vec![EditKind::Swap]);
    }

    #[test]
    fn all_infeasible_yields_copies() {
        let base = p(&["A"]);
        let out = sample_neighborhood(
            &base,
            3,
            ComposeRange::fixed(1),
            &[EditKind::Swap, EditKind::Delete],
            &PhrasePool::new(),
            &mut NoParaphrase,
            &mut rng(),
        );
        assert_eq!(out.len(), 3);
        assert!(out.iter().all(|c| c.prompt == base && c.kinds.is_empty()));
    }

    #[test]
    fn sample_neighborhood_singleton() {
        let base = p(&["A", "B"]);
        let out = sample_neighborhood(
            &base,
            1,
            ComposeRange::default(),
            &EditKind::ALL,
            &PhrasePool::from_inventory(&base, []),
            &mut NoParaphrase,
            &mut rng(),
        );
        assert_eq!(out.len(), 1);
    }

    #[test]
    fn crossover_examples() {
        let p1 = p(&["a", "b", "c", "d"]);
        let p2 = p(&["u", "v", "w", "x", "y", "z"]);
        assert_eq!(crossover_at(&p1, &p2, 2), p(&["a", "b", "w", "x", "y", "z"]));
        assert_eq!(crossover_at(&p1, &p2, 0), p2);
        assert_eq!(crossover_at(&p1, &p(&["u", "v"]), 4), p1);
    }

    /// Independent offspring builder: walks 1-based positions exactly as the
    /// pseudocode lists them.
    fn brute_offspring(p1: &Prompt, p2: &Prompt, split: usize) -> Prompt {
        let mut segs = Vec::new();
        for pos in 1..=split {
            if pos <= p1.len() {
                segs.push(p1.segments()[pos - 1].clone());
            }
        }
        for pos in (split + 1)..=p2.len() {
            segs.push(p2.segments()[pos - 1].clone());
        }
        if segs.is_empty() {
            p1.clone()
        } else {
            Prompt::new(segs)
        }
    }

    fn labelled(prefix: &str, n: usize) -> Prompt {
        Prompt::new(
            (0..n)
                .map(|i| Segment::parse(&format!("{prefix}{i}")).unwrap())
                .collect(),
        )
    }

    #[test]
    fn crossover_matches_brute_force_builder() {
        for l1 in 1..=6 {
            for l2 in 1..=6 {
                let (a, b) = (labelled("a", l1), labelled("b", l2));
                for split in 0..=l1.max(l2) {
                    let got = crossover_at(&a, &b, split);
                    assert_eq!(got, brute_offspring(&a, &b, split), "L1={l1} L2={l2} split={split}");
                    assert_eq!(got.len(), split.min(l1) + l2.saturating_sub(split));
                }
            }
        }
    }

    #[test]
    fn crossover_split_is_in_range() {
        let a = labelled("a", 3);
        let b = labelled("b", 5);
        let mut r = RngStream::new(5, crate::rng::SELECTION);
        for _ in 0..200 {
            let child = crossover(&a, &b, &mut r);
            assert!(!child.is_empty());
            assert!(child.len() <= 8);
        }
    }

    fn arb_prompt() -> impl Strategy<Value = Prompt> {
        prop::collection::vec("[a-e]{1,2}", 1..7)
            .prop_map(|words| Prompt::new(words.iter().map(|w| Segment::parse(w).unwrap()).collect()))
    }

    proptest! {
        #[test]
        fn edit_locality_and_closure(base in arb_prompt(), seed in 0u64..1000) {
            let pool = PhrasePool::from_inventory(&base, []);
            let mut table = StaticParaphraseTable::from_entries(
                [("a", vec!["x"]), ("b", vec!["y z"]), ("c", vec!["a"])],
            );
            let mut r = RngStream::new(seed, EDITS);
            for kind in EditKind::ALL {
                match apply_edit(&base, kind, &pool, &mut table, &mut r) {
                    Ok(out) => {
                        let expected = match kind {
                            EditKind::Delete => base.len() - 1,
                            EditKind::Add => base.len() + 1,
                            EditKind::Swap | EditKind::Paraphrase => base.len(),
                        };
                        prop_assert_eq!(out.prompt.len(), expected);
                        prop_assert!(out.prompt.segments().iter().all(|s| !s.is_empty()));
                        prop_assert_eq!(out.deleted.is_some(), kind == EditKind::Delete);
                    }
                    Err(Infeasible(k)) => {
                        prop_assert_eq!(k, kind);
                        let explained = match kind {
                            EditKind::Delete | EditKind::Swap => base.len() < 2,
                            EditKind::Add => false,
                            EditKind::Paraphrase => true,
                        };
                        prop_assert!(explained);
                    }
                }
            }
        }

        #[test]
        fn crossover_length_algebra(a in arb_prompt(), b in arb_prompt(), split in 0usize..8) {
            let child = crossover_at(&a, &b, split);
            let n = split.min(a.len()) + b.len().saturating_sub(split);
            if n > 0 {
                prop_assert_eq!(child.len(), n);
            } else {
                prop_assert_eq!(child, a);
            }
        }
    }
}
