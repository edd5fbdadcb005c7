//! Segment-structured prompts and the rule-based segmenter.
//!
//! A [`Prompt`] is an ordered list of [`Segment`]s, each an ordered non-empty
//! list of whitespace-free tokens. Segments are the unit every edit operator
//! works on.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::PromptError;

/// A phrase: one or more normalized tokens.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Segment(Vec<String>);

impl Segment {
    /// Builds a segment from raw tokens. Tokens are trimmed; a token with
    /// internal whitespace is split into several tokens.
    pub fn new<I, S>(tokens: I) -> Result<Self, PromptError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let tokens: Vec<String> = tokens
            .into_iter()
            .flat_map(|t| t.as_ref().split_whitespace().map(str::to_owned).collect::<Vec<_>>())
            .collect();
        if tokens.is_empty() {
            return Err(PromptError::EmptySegment);
        }
        Ok(Self(tokens))
    }

    /// Splits `text` on whitespace into one segment.
    pub fn parse(text: &str) -> Result<Self, PromptError> {
        Self::new(text.split_whitespace())
    }

    pub fn tokens(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn render(&self) -> String {
        self.0.join(" ")
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// The search point: an ordered sequence of segments.
///
/// Equality is exact structural equality, so `[[a b]]` and `[[a],[b]]` differ
/// even though they render to the same text.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prompt(Vec<Segment>);

impl Prompt {
    pub fn new(segments: Vec<Segment>) -> Self {
        Self(segments)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Convenience constructor: one segment per inner slice, tokens split on
    /// whitespace.
    pub fn from_phrases<S: AsRef<str>>(phrases: &[S]) -> Result<Self, PromptError> {
        phrases
            .iter()
            .map(|p| Segment::parse(p.as_ref()))
            .collect::<Result<Vec<_>, _>>()
            .map(Self)
    }

    pub fn segments(&self) -> &[Segment] {
        &self.0
    }

    pub fn into_segments(self) -> Vec<Segment> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        self.0.iter().flat_map(|s| s.0.iter().map(String::as_str))
    }

    /// Tokens joined by single spaces, in segment order.
    pub fn render(&self) -> String {
        self.tokens().collect::<Vec<_>>().join(" ")
    }

    /// The same tokens, one token per segment.
    pub fn flatten(&self) -> Prompt {
        Prompt(self.tokens().map(|t| Segment(vec![t.to_owned()])).collect())
    }
}

impl fmt::Display for Prompt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl From<Vec<Segment>> for Prompt {
    fn from(segments: Vec<Segment>) -> Self {
        Self(segments)
    }
}

/// Renders a prompt as text; the empty prompt renders as `""`.
pub fn render_prompt(p: &Prompt) -> String {
    p.render()
}

/// How raw text is cut into segments.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SegmenterMode {
    /// Consecutive groups of `tokens_per_segment` whitespace tokens.
    Whitespace,
    /// Phrases separated by any character of `delimiter`.
    Delimiter,
    /// `segments` groups of near-equal token count.
    FixedWidth,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmenterConfig {
    #[serde(default = "default_mode")]
    pub mode: SegmenterMode,
    #[serde(default = "default_delimiter")]
    pub delimiter: String,
    #[serde(default = "default_tokens_per_segment")]
    pub tokens_per_segment: usize,
    #[serde(default = "default_segments")]
    pub segments: usize,
}

fn default_mode() -> SegmenterMode {
    SegmenterMode::Whitespace
}
fn default_delimiter() -> String {
    ",".to_owned()
}
fn default_tokens_per_segment() -> usize {
    1
}
fn default_segments() -> usize {
    5
}

impl Default for SegmenterConfig {
    fn default() -> Self {
        Self {
            mode: default_mode(),
            delimiter: default_delimiter(),
            tokens_per_segment: default_tokens_per_segment(),
            segments: default_segments(),
        }
    }
}

impl SegmenterConfig {
    pub fn whitespace(tokens_per_segment: usize) -> Self {
        Self {
            mode: SegmenterMode::Whitespace,
            tokens_per_segment,
            ..Self::default()
        }
    }

    pub fn delimiter(delimiter: &str) -> Self {
        Self {
            mode: SegmenterMode::Delimiter,
            delimiter: delimiter.to_owned(),
            ..Self::default()
        }
    }

    pub fn fixed_width(segments: usize) -> Self {
        Self {
            mode: SegmenterMode::FixedWidth,
            segments,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), PromptError> {
        match self.mode {
            SegmenterMode::Whitespace if self.tokens_per_segment == 0 => {
                Err(PromptError::InvalidSegmenter("tokens_per_segment must be >= 1".into()))
            }
            SegmenterMode::Delimiter if self.delimiter.is_empty() => {
                Err(PromptError::InvalidSegmenter("delimiter must not be empty".into()))
            }
            SegmenterMode::FixedWidth if self.segments == 0 => {
                Err(PromptError::InvalidSegmenter("segments must be >= 1".into()))
            }
            _ => Ok(()),
        }
    }
}

/// Anything that can cut text into a [`Prompt`].
pub trait Segmenter {
    fn segment(&self, text: &str) -> Prompt;
}

impl Segmenter for SegmenterConfig {
    fn segment(&self, text: &str) -> Prompt {
        segment_prompt(text, self)
    }
}

/// Cuts `text` into segments. Deterministic for a fixed config; empty or
/// whitespace-only text yields the empty prompt.
pub fn segment_prompt(text: &str, config: &SegmenterConfig) -> Prompt {
    let chunk = |tokens: &[&str]| Segment(tokens.iter().map(|t| (*t).to_owned()).collect());
    match config.mode {
        SegmenterMode::Whitespace => {
            let tokens: Vec<&str> = text.split_whitespace().collect();
            Prompt(tokens.chunks(config.tokens_per_segment.max(1)).map(chunk).collect())
        }
        SegmenterMode::Delimiter => Prompt(
            text.split(|c: char| config.delimiter.contains(c))
                .filter_map(|piece| Segment::parse(piece).ok())
                .collect(),
        ),
        SegmenterMode::FixedWidth => {
            let tokens: Vec<&str> = text.split_whitespace().collect();
            let len = tokens.len();
            let parts = config.segments.max(1).min(len);
            Prompt(
                (0..parts)
                    .map(|j| chunk(&tokens[j * len / parts..(j + 1) * len / parts]))
                    .collect(),
            )
        }
    }
}
