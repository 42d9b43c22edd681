//! Run configuration, read from TOML.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::PipelineError;
use crate::clock::parse_timestamp;
use crate::emit::DEFAULT_MAPPING_TOOL;
use crate::model::{SourceId, SourcePriority, DEFAULT_SOURCES};
use crate::scoring::embedding::HttpEncoderConfig;
use crate::scoring::ScoreWeights;
use crate::validate::{LlmConfig, ValidationConfig};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValidatorChoice {
    #[default]
    Rule,
    Llm,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EmbeddingConfig {
    /// Content-addressed vector cache shared across runs.
    pub cache_dir: Option<PathBuf>,
    /// Serve vectors from the cache only.
    pub offline: bool,
    /// Use the deterministic hash encoder for both embedding scores.
    pub stub_seed: Option<u64>,
    pub sentence_transformer: Option<HttpEncoderConfig>,
    pub llm_embeddings: Option<HttpEncoderConfig>,
}

/// Output file locations; relative names resolve against the output
/// directory.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputNames {
    pub sssom: PathBuf,
    pub sssom_tsv: PathBuf,
    pub resolver_json: PathBuf,
    pub facilities_csv: PathBuf,
    pub linked_catalog: PathBuf,
    pub run_report: PathBuf,
}

impl Default for OutputNames {
    fn default() -> Self {
        Self {
            sssom: "mappings.sssom.txt".into(),
            sssom_tsv: "mappings.sssom.tsv".into(),
            resolver_json: "resolver.json".into(),
            facilities_csv: "facilities.csv".into(),
            linked_catalog: "linked-catalog.jsonl".into(),
            run_report: "run-report.json".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub strategy: PathBuf,
    /// Every `<source>.jsonl` in this directory is a catalog.
    #[serde(default)]
    pub catalog_dir: Option<PathBuf>,
    /// Explicit catalog files per source; these win over `catalog_dir`.
    #[serde(default)]
    pub catalogs: BTreeMap<SourceId, PathBuf>,
    #[serde(default)]
    pub weights: ScoreWeights,
    #[serde(default)]
    pub validation: ValidationConfig,
    #[serde(default)]
    pub validator: ValidatorChoice,
    #[serde(default)]
    pub llm: Option<LlmConfig>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub outputs: OutputNames,
    /// Most trusted first; empty means the built-in source order.
    #[serde(default)]
    pub source_priority: Vec<SourceId>,
    #[serde(default)]
    pub patch: Option<PathBuf>,
    #[serde(default)]
    pub embeddings: EmbeddingConfig,
    #[serde(default = "default_tool")]
    pub mapping_tool: String,
    /// Fixed start instant for mapping dates; the wall clock when absent.
    #[serde(default)]
    pub clock_start: Option<String>,
    /// Apply label mining and designator parsing at load.
    #[serde(default = "yes")]
    pub enrich: bool,
}

fn default_output_dir() -> PathBuf {
    "out".into()
}
fn default_tool() -> String {
    DEFAULT_MAPPING_TOOL.to_owned()
}
fn yes() -> bool {
    true
}

impl RunConfig {
    /// A config with defaults for everything but the strategy path.
    pub fn new(strategy: impl Into<PathBuf>) -> Self {
        Self {
            strategy: strategy.into(),
            catalog_dir: None,
            catalogs: BTreeMap::new(),
            weights: ScoreWeights::default(),
            validation: ValidationConfig::default(),
            validator: ValidatorChoice::Rule,
            llm: None,
            output_dir: default_output_dir(),
            outputs: OutputNames::default(),
            source_priority: Vec::new(),
            patch: None,
            embeddings: EmbeddingConfig::default(),
            mapping_tool: default_tool(),
            clock_start: None,
            enrich: true,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, PipelineError> {
        toml::from_str(text).map_err(|e| PipelineError::Config(e.to_string()))
    }

    /// Reads `path`; relative paths inside are taken from its directory.
    pub fn load(path: &Path) -> Result<Self, PipelineError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| PipelineError::Config(format!("{}: {e}", path.display())))?;
        let mut config = Self::from_toml(&text)
            .map_err(|e| PipelineError::Config(format!("{}: {e}", path.display())))?;
        config.rebase(path.parent().unwrap_or(Path::new(".")));
        Ok(config)
    }

    /// Prefixes every relative path with `base`.
    pub fn rebase(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.strategy);
        fix(&mut self.output_dir);
        self.catalog_dir.as_mut().map(fix);
        self.catalogs.values_mut().for_each(fix);
        self.patch.as_mut().map(fix);
        self.embeddings.cache_dir.as_mut().map(fix);
        if let Some(llm) = &mut self.llm {
            llm.audit_log.as_mut().map(fix);
        }
    }

    /// Catalog file of every configured source.
    pub fn catalog_files(&self) -> Result<BTreeMap<SourceId, PathBuf>, PipelineError> {
        let mut files = BTreeMap::new();
        if let Some(dir) = &self.catalog_dir {
            let entries = std::fs::read_dir(dir)
                .map_err(|e| PipelineError::Config(format!("catalog_dir {}: {e}", dir.display())))?;
            for entry in entries {
                let path = entry.map_err(|e| PipelineError::Config(e.to_string()))?.path();
                if path.extension().is_some_and(|x| x == "jsonl") {
                    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
                    let source = SourceId::new(stem).map_err(|e| PipelineError::Config(format!("{}: {e}", path.display())))?;
                    files.insert(source, path);
                }
            }
        }
        files.extend(self.catalogs.iter().map(|(s, p)| (s.clone(), p.clone())));
        Ok(files)
    }

    pub fn priority(&self) -> Result<SourcePriority, PipelineError> {
        let order = if self.source_priority.is_empty() {
            DEFAULT_SOURCES.iter().map(|s| SourceId::new(s).expect("valid default")).collect()
        } else {
            self.source_priority.clone()
        };
        SourcePriority::new(order).map_err(|e| PipelineError::Config(e.to_string()))
    }

    /// Referenced files exist and the settings are coherent.
    pub fn check(&self) -> Result<(), PipelineError> {
        let config = |m: String| Err(PipelineError::Config(m));
        if !self.strategy.is_file() {
            return config(format!("strategy file {} not found", self.strategy.display()));
        }
        for (source, path) in self.catalog_files()? {
            if !path.is_file() {
                return config(format!("catalog for {source}: {} not found", path.display()));
            }
        }
        if let Some(p) = &self.patch {
            if !p.is_file() {
                return config(format!("patch file {} not found", p.display()));
            }
        }
        if self.validator == ValidatorChoice::Llm && self.llm.is_none() {
            return config("validator = \"llm\" requires an [llm] section".into());
        }
        if let Some(start) = &self.clock_start {
            if parse_timestamp(start).is_none() {
                return config(format!("clock_start {start:?} is not a timestamp"));
            }
        }
        if self.embeddings.offline && self.embeddings.cache_dir.is_none() {
            return config("embeddings.offline requires embeddings.cache_dir".into());
        }
        self.validation.check().map_err(PipelineError::Config)?;
        self.priority()?;
        Ok(())
    }
}
