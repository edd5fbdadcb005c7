use std::collections::BTreeMap;

use crate::prompt::Segment;

/// Supplies alternative phrasings for a segment.
pub trait ParaphraseProvider {
    /// Alternatives for `segment`, excluding the segment itself. Must be
    /// deterministic for a given provider state.
    fn alternatives(&mut self, segment: &Segment) -> Vec<Segment>;
}

/// Provider that never has an alternative.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoParaphrase;

impl ParaphraseProvider for NoParaphrase {
    fn alternatives(&mut self, _segment: &Segment) -> Vec<Segment> {
        Vec::new()
    }
}

/// Lookup table keyed by the rendered segment.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StaticParaphraseTable {
    table: BTreeMap<String, Vec<Segment>>,
}

impl StaticParaphraseTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a table from `phrase -> [alternative, ...]` text entries.
    /// Blank alternatives and self-mappings are dropped.
    pub fn from_entries<K, V, I>(entries: I) -> Self
    where
        K: AsRef<str>,
        V: AsRef<str>,
        I: IntoIterator<Item = (K, Vec<V>)>,
    {
        let mut table = Self::new();
        for (k, vs) in entries {
            for v in vs {
                table.insert(k.as_ref(), v.as_ref());
            }
        }
        table
    }

    pub fn insert(&mut self, phrase: &str, alternative: &str) {
        let (Ok(key), Ok(alt)) = (Segment::parse(phrase), Segment::parse(alternative)) else {
            return;
        };
        if key == alt {
            return;
        }
        let alts = self.table.entry(key.render()).or_default();
        if !alts.contains(&alt) {
            alts.push(alt);
        }
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn get(&self, segment: &Segment) -> &[Segment] {
        self.table.get(&segment.render()).map(Vec::as_slice).unwrap_or(&[])
    }
}

impl ParaphraseProvider for StaticParaphraseTable {
    fn alternatives(&mut self, segment: &Segment) -> Vec<Segment> {
        self.get(segment).to_vec()
    }
}

#[cfg(feature = "remote")]
pub use remote::RemoteParaphraser;

#[cfg(feature = "remote")]
mod remote {
    use std::collections::BTreeMap;

    use serde::Deserialize;
    use serde_json::json;

    use super::ParaphraseProvider;
    use crate::prompt::Segment;
    use crate::remote::HttpClient;

    #[derive(Deserialize)]
    struct ParaphraseResponse {
        candidates: Vec<String>,
    }

    /// Paraphrases over `POST /v1/paraphrase`. Every response is recorded,
    /// so a replay with the recording never touches the network.
    #[derive(Debug, Clone)]
    pub struct RemoteParaphraser {
        client: HttpClient,
        url: String,
        recording: BTreeMap<String, Vec<String>>,
    }

    impl RemoteParaphraser {
        pub fn new(client: HttpClient, endpoint: &str) -> Self {
            Self {
                client,
                url: format!("{}/v1/paraphrase", endpoint.trim_end_matches('/')),
                recording: BTreeMap::new(),
            }
        }

        pub fn with_recording(mut self, recording: BTreeMap<String, Vec<String>>) -> Self {
            self.recording = recording;
            self
        }

        pub fn recording(&self) -> &BTreeMap<String, Vec<String>> {
            &self.recording
        }

        fn fetch(&self, phrase: &str) -> Vec<String> {
            let value = match self.client.post_json(&self.url, &json!({ "phrase": phrase })) {
                Ok(v) => v,
                Err(e) => {
                    log::warn!("paraphrase request for {phrase:?} failed: {e}");
                    return Vec::new();
                }
            };
            match serde_json::from_value::<ParaphraseResponse>(value) {
                Ok(r) => r.candidates,
                Err(e) => {
                    log::warn!("malformed paraphrase response: {e}");
                    Vec::new()
                }
            }
        }
    }

    impl ParaphraseProvider for RemoteParaphraser {
        fn alternatives(&mut self, segment: &Segment) -> Vec<Segment> {
            let key = segment.render();
            if !self.recording.contains_key(&key) {
                let fetched = self.fetch(&key);
                self.recording.insert(key.clone(), fetched);
            }
            let mut out: Vec<Segment> = Vec::new();
            for alt in &self.recording[&key] {
                if let Ok(s) = Segment::parse(alt) {
                    if &s != segment && !out.contains(&s) {
                        out.push(s);
                    }
                }
            }
            out
        }
    }
}
