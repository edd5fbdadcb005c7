use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::local::{Example, KeywordObjective, TableObjective, TargetDistanceObjective};
use super::{Objective, Scorer};
use crate::budget::BudgetLedger;
use crate::error::ConfigError;
use crate::prompt::{segment_prompt, SegmenterConfig};

/// Which objective to use, with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ScorerKind {
    /// Fraction of target tokens present.
    Keyword { targets: BTreeSet<String> },
    /// Segment-level edit-distance similarity to `target`, which is cut with
    /// the run's segmenter.
    TargetDistance { target: String },
    /// Fixed scores keyed by rendered prompt.
    TableLookup {
        table: BTreeMap<String, f64>,
        #[serde(default)]
        default: f64,
    },
    /// Accuracy reported by a remote scoring service.
    AccuracyRemote {
        endpoint: String,
        #[serde(default)]
        examples: Vec<Example>,
        /// JSONL file of `{"input", "label"}` rows, appended to `examples`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        examples_file: Option<String>,
        #[serde(default = "default_timeout_ms")]
        timeout_ms: u64,
        #[serde(default = "default_in_flight")]
        max_in_flight: usize,
    },
}

fn default_timeout_ms() -> u64 {
    30_000
}

fn default_in_flight() -> usize {
    1
}

/// Objective plus cache policy.
#[derive(Debug, Clone, PartialEq)]
pub struct ScorerSpec {
    pub kind: ScorerKind,
    pub cache: bool,
    pub cached_hits_consume_budget: bool,
}

impl ScorerSpec {
    pub fn new(kind: ScorerKind) -> Self {
        Self {
            kind,
            cache: true,
            cached_hits_consume_budget: false,
        }
    }

    pub fn keyword<I: IntoIterator<Item = S>, S: Into<String>>(targets: I) -> Self {
        Self::new(ScorerKind::Keyword {
            targets: targets.into_iter().map(Into::into).collect(),
        })
    }

    pub fn target_distance(target: &str) -> Self {
        Self::new(ScorerKind::TargetDistance {
            target: target.to_owned(),
        })
    }

    pub fn with_cache(mut self, cache: bool) -> Self {
        self.cache = cache;
        self
    }

    pub fn is_local(&self) -> bool {
        !matches!(self.kind, ScorerKind::AccuracyRemote { .. })
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        match &self.kind {
            ScorerKind::Keyword { targets } if targets.is_empty() => {
                Err(ConfigError::invalid("scorer.targets must not be empty"))
            }
            ScorerKind::TargetDistance { target } if target.trim().is_empty() => {
                Err(ConfigError::invalid("scorer.target must not be empty"))
            }
            ScorerKind::TableLookup { table, default } => {
                let bad = table
                    .values()
                    .chain(std::iter::once(default))
                    .any(|v| !(0.0..=1.0).contains(v));
                if bad {
                    Err(ConfigError::invalid("scorer.table scores must lie in [0, 1]"))
                } else {
                    Ok(())
                }
            }
            ScorerKind::AccuracyRemote {
                endpoint,
                max_in_flight,
                ..
            } => {
                if endpoint.is_empty() {
                    Err(ConfigError::invalid("scorer.endpoint must not be empty"))
                } else if *max_in_flight == 0 {
                    Err(ConfigError::invalid("scorer.max_in_flight must be >= 1"))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    /// Builds the objective alone.
    pub fn objective(&self, segmenter: &SegmenterConfig) -> Result<Box<dyn Objective>, ConfigError> {
        self.validate()?;
        Ok(match &self.kind {
            ScorerKind::Keyword { targets } => Box::new(KeywordObjective::new(targets.iter().cloned())),
            ScorerKind::TargetDistance { target } => {
                Box::new(TargetDistanceObjective::new(segment_prompt(target, segmenter)))
            }
            ScorerKind::TableLookup { table, default } => Box::new(TableObjective::new(table.clone(), *default)),
            ScorerKind::AccuracyRemote { .. } => self.remote_objective()?,
        })
    }

    #[cfg(feature = "remote")]
    fn remote_objective(&self) -> Result<Box<dyn Objective>, ConfigError> {
        let ScorerKind::AccuracyRemote {
            endpoint,
            examples,
            examples_file,
            timeout_ms,
            max_in_flight,
        } = &self.kind
        else {
            unreachable!("called for remote kinds only");
        };
        let mut rows = examples.clone();
        if let Some(path) = examples_file {
            rows.extend(load_examples(path)?);
        }
        let labels: BTreeSet<&str> = rows.iter().map(|e| e.label.as_str()).collect();
        let meta = serde_json::json!({ "examples": rows, "labels": labels });
        let client = crate::remote::HttpClient::from_env(std::time::Duration::from_millis(*timeout_ms));
        Ok(Box::new(
            super::RemoteObjective::new(client, endpoint, meta).with_max_in_flight(*max_in_flight),
        ))
    }

    #[cfg(not(feature = "remote"))]
    fn remote_objective(&self) -> Result<Box<dyn Objective>, ConfigError> {
        Err(ConfigError::invalid("remote scoring is not available in this build"))
    }

    /// Builds a [`Scorer`] charging `ledger`.
    pub fn build(&self, segmenter: &SegmenterConfig, ledger: BudgetLedger) -> Result<Scorer, ConfigError> {
        Ok(Scorer::new(self.objective(segmenter)?, ledger)
            .with_cache(self.cache)
            .with_cached_hits_consume_budget(self.cached_hits_consume_budget))
    }
}

/// Reads a JSONL score set.
pub fn load_examples(path: &str) -> Result<Vec<Example>, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_owned(),
        source,
    })?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(ConfigError::from))
        .collect()
}

const CACHE_KEY: &str = "cache";
const HITS_KEY: &str = "cached_hits_consume_budget";

impl Serialize for ScorerSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = match serde_json::to_value(&self.kind).map_err(serde::ser::Error::custom)? {
            Value::Object(m) => m,
            _ => return Err(serde::ser::Error::custom("scorer kind must be an object")),
        };
        map.insert(CACHE_KEY.into(), Value::Bool(self.cache));
        map.insert(HITS_KEY.into(), Value::Bool(self.cached_hits_consume_budget));
        map.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ScorerSpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let mut map = Map::<String, Value>::deserialize(deserializer)?;
        let flag = |map: &mut Map<String, Value>, key: &str, default: bool| match map.remove(key) {
            None => Ok(default),
            Some(Value::Bool(b)) => Ok(b),
            Some(other) => Err(D::Error::custom(format!("`{key}` must be a boolean, got {other}"))),
        };
        let cache = flag(&mut map, CACHE_KEY, true)?;
        let cached_hits_consume_budget = flag(&mut map, HITS_KEY, false)?;
        let kind = ScorerKind::deserialize(Value::Object(map)).map_err(D::Error::custom)?;
        Ok(Self {
            kind,
            cache,
            cached_hits_consume_budget,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prompt::Prompt;

    #[test]
    fn json_round_trip_with_flags() {
        let spec: ScorerSpec =
            serde_json::from_str(r#"{"kind": "keyword", "targets": ["cat", "shadows"], "cache": false}"#).unwrap();
        assert!(!spec.cache);
        assert!(!spec.cached_hits_consume_budget);
        let back: ScorerSpec = serde_json::from_value(serde_json::to_value(&spec).unwrap()).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = serde_json::from_str::<ScorerSpec>(r#"{"kind": "keyword", "targets": ["a"], "bogus": 1}"#);
        assert!(err.is_err());
        let err = serde_json::from_str::<ScorerSpec>(r#"{"kind": "nope"}"#);
        assert!(err.is_err());
    }

    #[test]
    fn validation() {
        assert!(ScorerSpec::keyword(Vec::<String>::new()).validate().is_err());
        assert!(ScorerSpec::target_distance(" ").validate().is_err());
        let bad = ScorerSpec::new(ScorerKind::TableLookup {
            table: [("a".into(), 1.5)].into(),
            default: 0.0,
        });
        assert!(bad.validate().is_err());
    }

    #[test]
    fn build_target_distance_uses_segmenter() {
        let spec = ScorerSpec::target_distance("a b c");
        let mut s = spec
            .build(&SegmenterConfig::whitespace(1), BudgetLedger::unlimited())
            .unwrap();
        assert_eq!(s.score(&Prompt::from_phrases(&["a", "b", "c"]).unwrap()), Ok(1.0));
        assert!(s.is_local());
    }

    #[test]
    fn examples_file_loading() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.jsonl");
        std::fs::write(
            &path,
            "{\"input\": \"x\", \"label\": \"yes\"}\n\n{\"input\": \"y\", \"label\": \"no\"}\n",
        )
        .unwrap();
        let rows = load_examples(path.to_str().unwrap()).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(load_examples("/nonexistent/file.jsonl").is_err());
    }
}
