//! Metaheuristic search over segment-structured text prompts.
//!
//! A prompt is a sequence of segments. Search algorithms move through
//! prompt space with delete, add, swap and paraphrase edits (plus
//! crossover and recombination for the population methods) and keep
//! whatever a black-box objective scores highest, within a call budget.
//!
//! ```
//! use plum_core::config::RunConfig;
//!
//! let cfg = RunConfig::from_json(r#"{
//!     "algorithm": "hc",
//!     "initial_prompt": "a b c d",
//!     "scorer": {"kind": "keyword", "targets": ["a", "d"]},
//!     "search": {"max_iterations": 5}
//! }"#).unwrap();
//! let out = cfg.execute().unwrap();
//! assert_eq!(out.result_score(), Some(1.0));
//! ```

pub mod budget;
pub mod candidate;
pub mod config;
pub mod edits;
pub mod error;
pub mod harness;
pub mod prompt;
#[cfg(feature = "remote")]
pub mod remote;
pub mod rng;
pub mod scoring;
pub mod search;

pub use candidate::Candidate;
pub use prompt::{render_prompt, segment_prompt, Prompt, Segment, SegmenterConfig};
pub use search::{Algorithm, SearchOutcome};
