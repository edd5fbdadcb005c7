//! Run configuration: the JSON schema, validation, command-line overrides,
//! and turning a config into a ready-to-run search.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::budget::BudgetLedger;
use crate::edits::{ComposeRange, EditKind, NoParaphrase, ParaphraseProvider, PhrasePool, StaticParaphraseTable};
use crate::error::ConfigError;
use crate::prompt::{segment_prompt, Prompt, Segment, SegmenterConfig};
use crate::scoring::ScorerSpec;
use crate::search::{
    run_algorithm, Algorithm, AlgorithmParams, Editor, GaCrossoverParams, GaMutationParams, HarmonyParams,
    Neighborhood, SearchConfig, SearchContext, SearchOutcome, TabuParams, TemperatureSchedule,
};

/// The initial prompt, inline or from a file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialPrompt {
    Text(String),
    File { file: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SearchSection {
    pub max_iterations: usize,
    pub candidates: usize,
    pub num_compose: ComposeRange,
    pub patience: usize,
    /// Maximum scorer calls; `None` is unlimited.
    pub budget: Option<u64>,
    pub wall_clock_ms: Option<u64>,
    pub neighborhood: Neighborhood,
}

impl Default for SearchSection {
    fn default() -> Self {
        let s = SearchConfig::default();
        Self {
            max_iterations: s.max_iterations,
            candidates: s.candidates,
            num_compose: s.num_compose,
            patience: s.patience,
            budget: None,
            wall_clock_ms: None,
            neighborhood: s.neighborhood,
        }
    }
}

/// Parameters of every algorithm in one flat block; each algorithm reads
/// its own keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AlgoSection {
    pub temperature: TemperatureSchedule,
    pub tournament_size: usize,
    pub archive_cap: Option<usize>,
    pub population_size: usize,
    pub offspring: usize,
    pub mutation_rate: f64,
    pub tabu_size: usize,
    pub aspiration: f64,
    pub memory_size: usize,
    pub segments: usize,
    pub hmcr: f64,
    pub par: f64,
}

impl Default for AlgoSection {
    fn default() -> Self {
        let gm = GaMutationParams::default();
        let gc = GaCrossoverParams::default();
        let ts = TabuParams::default();
        let hs = HarmonyParams::default();
        Self {
            temperature: TemperatureSchedule::default(),
            tournament_size: gm.tournament_size,
            archive_cap: gm.archive_cap,
            population_size: gc.population_size,
            offspring: gc.offspring,
            mutation_rate: gc.mutation_rate,
            tabu_size: ts.tabu_size,
            aspiration: ts.aspiration,
            memory_size: hs.memory_size,
            segments: hs.segments,
            hmcr: hs.hmcr,
            par: hs.par,
        }
    }
}

impl AlgoSection {
    pub fn params(&self) -> AlgorithmParams {
        AlgorithmParams {
            schedule: self.temperature.clone(),
            ga_mutation: GaMutationParams {
                tournament_size: self.tournament_size,
                archive_cap: self.archive_cap,
            },
            ga_crossover: GaCrossoverParams {
                population_size: self.population_size,
                offspring: self.offspring,
                mutation_rate: self.mutation_rate,
            },
            tabu: TabuParams {
                tabu_size: self.tabu_size,
                aspiration: self.aspiration,
            },
            harmony: HarmonyParams {
                memory_size: self.memory_size,
                segments: self.segments,
                hmcr: self.hmcr,
                par: self.par,
            },
        }
    }
}

/// Operator set and phrase sources.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EditsSection {
    pub ops: Vec<EditKind>,
    /// Phrases in the add pool from the start, besides the initial segments.
    pub extra_phrases: Vec<String>,
    /// Static paraphrase table: phrase to alternatives.
    pub paraphrases: BTreeMap<String, Vec<String>>,
    /// Remote paraphrase service; used for phrases missing from the table.
    pub paraphrase_endpoint: Option<String>,
    pub paraphrase_timeout_ms: u64,
}

impl Default for EditsSection {
    fn default() -> Self {
        Self {
            ops: EditKind::ALL.to_vec(),
            extra_phrases: Vec::new(),
            paraphrases: BTreeMap::new(),
            paraphrase_endpoint: None,
            paraphrase_timeout_ms: 30_000,
        }
    }
}

impl EditsSection {
    pub fn extra_segments(&self) -> Result<Vec<Segment>, ConfigError> {
        self.extra_phrases
            .iter()
            .map(|s| Segment::parse(s).map_err(ConfigError::from))
            .collect()
    }

    pub fn table(&self) -> StaticParaphraseTable {
        StaticParaphraseTable::from_entries(self.paraphrases.iter().map(|(k, v)| (k, v.clone())))
    }

    /// The paraphrase source this section describes.
    pub fn provider(&self) -> Result<Box<dyn ParaphraseProvider>, ConfigError> {
        match &self.paraphrase_endpoint {
            None if self.paraphrases.is_empty() => Ok(Box::new(NoParaphrase)),
            None => Ok(Box::new(self.table())),
            Some(endpoint) => self.remote_provider(endpoint),
        }
    }

    #[cfg(feature = "remote")]
    fn remote_provider(&self, endpoint: &str) -> Result<Box<dyn ParaphraseProvider>, ConfigError> {
        let client = crate::remote::HttpClient::from_env(Duration::from_millis(self.paraphrase_timeout_ms));
        Ok(Box::new(TableFirst {
            table: self.table(),
            fallback: crate::edits::RemoteParaphraser::new(client, endpoint),
        }))
    }

    #[cfg(not(feature = "remote"))]
    fn remote_provider(&self, _endpoint: &str) -> Result<Box<dyn ParaphraseProvider>, ConfigError> {
        Err(ConfigError::invalid(
            "remote paraphrasing is not available in this build",
        ))
    }
}

/// Table lookups, falling back to another provider on a miss.
#[cfg(feature = "remote")]
struct TableFirst<P> {
    table: StaticParaphraseTable,
    fallback: P,
}

#[cfg(feature = "remote")]
impl<P: ParaphraseProvider> ParaphraseProvider for TableFirst<P> {
    fn alternatives(&mut self, segment: &Segment) -> Vec<Segment> {
        let hit = self.table.alternatives(segment);
        if hit.is_empty() {
            self.fallback.alternatives(segment)
        } else {
            hit
        }
    }
}

/// One run: algorithm, problem and settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    pub initial_prompt: InitialPrompt,
    #[serde(default)]
    pub segmenter: SegmenterConfig,
    pub scorer: ScorerSpec,
    #[serde(default)]
    pub search: SearchSection,
    #[serde(default)]
    pub algo: AlgoSection,
    #[serde(default)]
    pub edits: EditsSection,
    #[serde(default)]
    pub seed: u64,
}

/// Command-line values that replace file values when set.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub algorithm: Option<Algorithm>,
    pub seed: Option<u64>,
    pub max_iterations: Option<usize>,
    pub candidates: Option<usize>,
    pub patience: Option<usize>,
    pub budget: Option<u64>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut RunConfig) {
        if let Some(a) = self.algorithm {
            cfg.algorithm = a;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(n) = self.max_iterations {
            cfg.search.max_iterations = n;
        }
        if let Some(m) = self.candidates {
            cfg.search.candidates = m;
        }
        if let Some(p) = self.patience {
            cfg.search.patience = p;
        }
        if let Some(b) = self.budget {
            cfg.search.budget = Some(b);
        }
    }
}

fn unit_interval(name: &str, x: f64) -> Result<(), ConfigError> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(ConfigError::invalid(format!("{name} must lie in [0, 1], got {x}")))
    }
}

fn at_least(name: &str, x: usize, min: usize) -> Result<(), ConfigError> {
    if x >= min {
        Ok(())
    } else {
        Err(ConfigError::invalid(format!("{name} must be >= {min}, got {x}")))
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Reads a config file. A relative `initial_prompt.file` is resolved
    /// against the config's directory and inlined.
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let mut cfg = Self::from_json(&text)?;
        cfg.inline_prompt(path.parent().unwrap_or(Path::new(".")))?;
        Ok(cfg)
    }

    /// Replaces a file reference with the file's text.
    pub fn inline_prompt(&mut self, base: &Path) -> Result<(), ConfigError> {
        if let InitialPrompt::File { file } = &self.initial_prompt {
            let path = base.join(file);
            let text = std::fs::read_to_string(&path).map_err(|source| ConfigError::Io {
                path: path.display().to_string(),
                source,
            })?;
            self.initial_prompt = InitialPrompt::Text(text.trim().to_owned());
        }
        Ok(())
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..self.clone() }
    }

    /// The segmented initial prompt. Panics on an unresolved file reference.
    pub fn initial(&self) -> Prompt {
        match &self.initial_prompt {
            InitialPrompt::Text(t) => segment_prompt(t, &self.segmenter),
            InitialPrompt::File { file } => panic!("initial prompt file {file} was not inlined"),
        }
    }

    /// Checks every range before anything is scored.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if let InitialPrompt::File { file } = &self.initial_prompt {
            return Err(ConfigError::invalid(format!(
                "initial prompt file {file} was not loaded"
            )));
        }
        self.segmenter.validate()?;
        if self.initial().is_empty() {
            return Err(ConfigError::invalid("initial_prompt is empty after segmentation"));
        }
        self.scorer.validate()?;

        let s = &self.search;
        at_least("search.max_iterations", s.max_iterations, 1)?;
        at_least("search.candidates", s.candidates, 1)?;
        if !s.num_compose.is_valid() {
            return Err(ConfigError::invalid("search.num_compose must satisfy 1 <= min <= max"));
        }

        let a = &self.algo;
        if !a.temperature.is_valid() {
            return Err(ConfigError::invalid("algo.temperature must be non-negative and finite"));
        }
        at_least("algo.tournament_size", a.tournament_size, 1)?;
        if let Some(cap) = a.archive_cap {
            at_least("algo.archive_cap", cap, 2)?;
        }
        at_least("algo.population_size", a.population_size, 1)?;
        unit_interval("algo.mutation_rate", a.mutation_rate)?;
        at_least("algo.tabu_size", a.tabu_size, 1)?;
        unit_interval("algo.aspiration", a.aspiration)?;
        at_least("algo.memory_size", a.memory_size, 1)?;
        at_least("algo.segments", a.segments, 1)?;
        unit_interval("algo.hmcr", a.hmcr)?;
        unit_interval("algo.par", a.par)?;

        let e = &self.edits;
        if e.ops.is_empty() {
            return Err(ConfigError::invalid("edits.ops must not be empty"));
        }
        for (i, k) in e.ops.iter().enumerate() {
            if e.ops[..i].contains(k) {
                return Err(ConfigError::invalid(format!("edits.ops lists {k} twice")));
            }
        }
        e.extra_segments()?;
        Ok(())
    }

    pub fn search_config(&self) -> SearchConfig {
        SearchConfig {
            max_iterations: self.search.max_iterations,
            candidates: self.search.candidates,
            num_compose: self.search.num_compose,
            patience: self.search.patience,
            neighborhood: self.search.neighborhood,
        }
    }

    pub fn ledger(&self) -> BudgetLedger {
        let ledger = BudgetLedger::new(self.search.budget);
        match self.search.wall_clock_ms {
            Some(ms) => ledger.with_wall_clock_limit(Duration::from_millis(ms)),
            None => ledger,
        }
    }

    pub fn editor(&self, init: &Prompt) -> Result<Editor, ConfigError> {
        let extra = self.edits.extra_segments()?;
        let pool = PhrasePool::from_inventory(init, &extra);
        Ok(Editor::new(self.edits.ops.clone(), pool, self.edits.provider()?))
    }

    /// Validated scorer, editor and streams for `self.seed`.
    pub fn context(&self) -> Result<SearchContext, ConfigError> {
        self.validate()?;
        let scorer = self.scorer.build(&self.segmenter, self.ledger())?;
        Ok(SearchContext::new(scorer, self.editor(&self.initial())?, self.seed))
    }

    /// Validates and runs the configured search once.
    pub fn execute(&self) -> Result<SearchOutcome, ConfigError> {
        let mut ctx = self.context()?;
        Ok(run_algorithm(
            self.algorithm,
            &self.initial(),
            &self.search_config(),
            &self.algo.params(),
            &mut ctx,
        ))
    }

    /// The resolved config as JSON, as echoed into traces.
    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("config serializes")
    }
}
