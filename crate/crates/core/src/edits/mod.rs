//! The neighborhood: four segment-level edit operators, their composition,
//! crossover, and exhaustive neighbor enumeration.

mod neighbors;
mod ops;
mod paraphrase;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::prompt::{Prompt, Segment};

pub use neighbors::enumerate_neighbors;
pub use ops::{
    apply_edit, compose_edits, crossover, crossover_at, sample_neighborhood, Composed, EditOutcome, Infeasible,
};
#[cfg(feature = "remote")]
pub use paraphrase::RemoteParaphraser;
pub use paraphrase::{NoParaphrase, ParaphraseProvider, StaticParaphraseTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EditKind {
    Delete,
    Add,
    Swap,
    Paraphrase,
}

impl EditKind {
    /// The full operator set, in a fixed order.
    pub const ALL: [EditKind; 4] = [EditKind::Delete, EditKind::Swap, EditKind::Paraphrase, EditKind::Add];

    /// Paraphrase only; used for small pitch adjustments in harmony search.
    pub const SMALL: [EditKind; 1] = [EditKind::Paraphrase];

    pub fn as_str(self) -> &'static str {
        match self {
            EditKind::Delete => "delete",
            EditKind::Add => "add",
            EditKind::Swap => "swap",
            EditKind::Paraphrase => "paraphrase",
        }
    }
}

impl fmt::Display for EditKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EditKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "delete" | "del" => Ok(EditKind::Delete),
            "add" => Ok(EditKind::Add),
            "swap" => Ok(EditKind::Swap),
            "paraphrase" | "par" => Ok(EditKind::Paraphrase),
            other => Err(format!("unknown edit kind `{other}`")),
        }
    }
}

/// Segments available to the `add` operator. A multiset: a phrase deleted
/// twice is twice as likely to come back.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PhrasePool {
    segments: Vec<Segment>,
}

impl PhrasePool {
    pub fn new() -> Self {
        Self::default()
    }

    /// Pool seeded with the initial prompt's segments plus any extra phrases.
    pub fn from_inventory<'a>(initial: &Prompt, extra: impl IntoIterator<Item = &'a Segment>) -> Self {
        let mut segments = initial.segments().to_vec();
        segments.extend(extra.into_iter().cloned());
        Self { segments }
    }

    pub fn insert(&mut self, segment: Segment) {
        self.segments.push(segment);
    }

    pub fn extend(&mut self, segments: impl IntoIterator<Item = Segment>) {
        self.segments.extend(segments);
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn get(&self, i: usize) -> &Segment {
        &self.segments[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Segment> {
        self.segments.iter()
    }

    /// Distinct members in first-seen order.
    pub fn distinct(&self) -> Vec<Segment> {
        let set: indexmap::IndexSet<&Segment> = self.segments.iter().collect();
        set.into_iter().cloned().collect()
    }
}

/// Inclusive range of edits per candidate; `l` is drawn uniformly from it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "ComposeRangeRepr", into = "[usize; 2]")]
pub struct ComposeRange {
    pub min: usize,
    pub max: usize,
}

impl ComposeRange {
    pub fn fixed(l: usize) -> Self {
        Self { min: l, max: l }
    }

    pub fn new(min: usize, max: usize) -> Self {
        Self { min, max }
    }

    pub fn is_valid(&self) -> bool {
        self.min >= 1 && self.min <= self.max
    }
}

impl Default for ComposeRange {
    fn default() -> Self {
        Self { min: 1, max: 2 }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ComposeRangeRepr {
    Fixed(usize),
    Range([usize; 2]),
}

impl From<ComposeRangeRepr> for ComposeRange {
    fn from(r: ComposeRangeRepr) -> Self {
        match r {
            ComposeRangeRepr::Fixed(l) => Self::fixed(l),
            ComposeRangeRepr::Range([a, b]) => Self::new(a, b),
        }
    }
}

impl From<ComposeRange> for [usize; 2] {
    fn from(r: ComposeRange) -> Self {
        [r.min, r.max]
    }
}
