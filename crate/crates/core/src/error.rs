use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PromptError {
    #[error("segment must contain at least one token")]
    EmptySegment,
    #[error("invalid segmenter config: {0}")]
    InvalidSegmenter(String),
}

/// Errors raised while evaluating the objective.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScoreError {
    #[error("call budget exhausted")]
    BudgetExhausted,
    #[error("remote scorer failed after {attempts} attempts: {message}")]
    Remote { attempts: u32, message: String },
    #[error("protocol error: {0}")]
    Protocol(String),
    #[error("cannot score the empty prompt")]
    EmptyPrompt,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error("failed to parse config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error(transparent)]
    Prompt(#[from] PromptError),
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl ConfigError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Self::Invalid(msg.into())
    }
}
