use indexmap::IndexSet;

use super::ops::{delete_at, insert_at, replace_at, swap_at};
use super::{EditKind, ParaphraseProvider};
use crate::prompt::{Prompt, Segment};

/// Every prompt one edit away from `p`, with each choice point expanded
/// instead of sampled. `pool` is taken as a set. Order is deterministic
/// (operator order of `ops`, then positions ascending) and duplicates are
/// dropped; `p` itself is excluded.
pub fn enumerate_neighbors(
    p: &Prompt,
    ops: &[EditKind],
    pool: &[Segment],
    provider: &mut dyn ParaphraseProvider,
) -> Vec<Prompt> {
    let len = p.len();
    let mut out: IndexSet<Prompt> = IndexSet::new();
    for &kind in ops {
        match kind {
            EditKind::Delete if len >= 2 => {
                out.extend((0..len).map(|i| delete_at(p, i).0));
            }
            EditKind::Add => {
                for seg in pool {
                    out.extend((0..=len).map(|pos| insert_at(p, pos, seg.clone())));
                }
            }
            EditKind::Swap if len >= 2 => {
                for i in 0..len {
                    out.extend((i + 1..len).map(|j| swap_at(p, i, j)));
                }
            }
            EditKind::Paraphrase => {
                for (i, seg) in p.segments().iter().enumerate() {
                    for alt in provider.alternatives(seg) {
                        out.insert(replace_at(p, i, alt));
                    }
                }
            }
            _ => {}
        }
    }
    out.shift_remove(p);
    out.into_iter().collect()
}
