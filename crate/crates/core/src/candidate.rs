use crate::edits::EditKind;
use crate::prompt::Prompt;

/// How a candidate came to be.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Initial,
    Edited(Vec<EditKind>),
    Crossover,
    Harmony,
}

/// A scored prompt. Fields are private so the score cannot change after
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    prompt: Prompt,
    score: f64,
    origin: Origin,
}

impl Candidate {
    pub fn new(prompt: Prompt, score: f64, origin: Origin) -> Self {
        Self { prompt, score, origin }
    }

    pub fn prompt(&self) -> &Prompt {
        &self.prompt
    }

    pub fn score(&self) -> f64 {
        self.score
    }

    pub fn origin(&self) -> &Origin {
        &self.origin
    }

    pub fn into_prompt(self) -> Prompt {
        self.prompt
    }
}

/// Index of the highest score; ties go to the lowest index.
pub fn argmax<T>(items: &[T], score: impl Fn(&T) -> f64) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, item) in items.iter().enumerate() {
        let s = score(item);
        if best.is_none_or(|(_, b)| s > b) {
            best = Some((i, s));
        }
    }
    best.map(|(i, _)| i)
}

/// Keeps the `n` best candidates; equal scores keep insertion order.
pub fn truncate_top(pool: &mut Vec<Candidate>, n: usize) {
    pool.sort_by(|a, b| b.score.total_cmp(&a.score));
    pool.truncate(n);
}
