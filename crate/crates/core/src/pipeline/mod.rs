//! End-to-end run: load catalogs, walk the strategy line by line, publish.

pub mod config;
pub mod report;

use std::collections::HashSet;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::clock::{Clock, FixedClock, SystemClock};
use crate::diagnostics::{Diagnostic, Level};
use crate::emit::record::sort_records;
use crate::emit::{
    emit_ivoa_csv, emit_linked_catalog, emit_resolver_json, emit_sssom, emit_sssom_tsv, MappingRecord, PublishedSets,
};
use crate::ingest::{enrich_entity, load_snapshot, PatchSet};
use crate::matcher::{filter_list, generate_pairs, resolve_external_ids, sides, PairStatus};
use crate::model::{Catalog, EntityRef, SetRegistry, SourceId, SourcePriority};
use crate::profile::build_profiles;
use crate::scoring::embedding::HttpEncoderConfig;
use crate::scoring::{
    global_score, EmbeddingCache, EmbeddingStore, Encoders, HttpEncoder, PairScorer, StubEncoder,
};
use crate::strategy::{validate_strategy, Strategy, StrategyLine};
use crate::validate::{run_validation_loop, HttpChatTransport, LlmValidator, RuleValidator, Validator};

pub use config::{EmbeddingConfig, OutputNames, RunConfig, ValidatorChoice};
pub use report::{DiagnosticCounts, LineReport, LineStatus, RunReport};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("transport error: {0}")]
    Transport(String),
    #[error("strategy line {line_no} `{line}`: {source}")]
    Line {
        line_no: usize,
        line: String,
        source: Box<PipelineError>,
    },
}

impl PipelineError {
    /// Process exit code: 1 config, 2 data, 3 transport.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Config(_) => 1,
            PipelineError::Data(_) => 2,
            PipelineError::Transport(_) => 3,
            PipelineError::Line { source, .. } => source.exit_code(),
        }
    }
}

/// The published documents of a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outputs {
    pub sssom: String,
    pub sssom_tsv: String,
    pub resolver_json: String,
    pub facilities_csv: String,
    pub linked_catalog: String,
}

#[derive(Debug)]
pub struct PipelineOutcome {
    pub catalog: Catalog,
    pub registry: SetRegistry,
    pub records: Vec<MappingRecord>,
    pub outputs: Outputs,
    pub report: RunReport,
    pub diagnostics: Vec<Diagnostic>,
}

impl PipelineOutcome {
    /// Writes every document plus the run report; returns the paths.
    pub fn write(&self, dir: &Path, names: &OutputNames) -> Result<Vec<PathBuf>, PipelineError> {
        std::fs::create_dir_all(dir).map_err(|e| PipelineError::Data(format!("{}: {e}", dir.display())))?;
        let report = self.report.to_json();
        let docs = [
            (&names.sssom, &self.outputs.sssom),
            (&names.sssom_tsv, &self.outputs.sssom_tsv),
            (&names.resolver_json, &self.outputs.resolver_json),
            (&names.facilities_csv, &self.outputs.facilities_csv),
            (&names.linked_catalog, &self.outputs.linked_catalog),
            (&names.run_report, &report),
        ];
        let mut written = Vec::new();
        for (name, text) in docs {
            let path = dir.join(name);
            std::fs::write(&path, text).map_err(|e| PipelineError::Data(format!("{}: {e}", path.display())))?;
            written.push(path);
        }
        Ok(written)
    }
}

/// Loads, enriches and patches the configured catalogs.
pub fn load_catalog(config: &RunConfig) -> Result<(Catalog, Vec<Diagnostic>), PipelineError> {
    let mut catalog = Catalog::new();
    for (source, path) in config.catalog_files()? {
        let file = File::open(&path).map_err(|e| PipelineError::Data(format!("{}: {e}", path.display())))?;
        let snapshot = load_snapshot(BufReader::new(file), source)
            .map_err(|e| PipelineError::Data(format!("{}: {e}", path.display())))?;
        for mut entity in snapshot.records {
            if config.enrich {
                enrich_entity(&mut entity);
            }
            catalog
                .insert(entity)
                .map_err(|e| PipelineError::Data(format!("{}: {e}", path.display())))?;
        }
    }
    let mut diagnostics = Vec::new();
    if let Some(p) = &config.patch {
        let patches = PatchSet::load(p).map_err(|e| PipelineError::Data(format!("{}: {e}", p.display())))?;
        diagnostics.extend(patches.apply(&mut catalog).map_err(|e| PipelineError::Data(e.to_string()))?);
    }
    Ok((catalog, diagnostics))
}

fn encoder_store(
    config: &EmbeddingConfig,
    http: Option<&HttpEncoderConfig>,
    stub_offset: u64,
) -> Option<EmbeddingStore> {
    let cache = config.cache_dir.as_ref().map(EmbeddingCache::new);
    if let Some(seed) = config.stub_seed {
        return Some(EmbeddingStore::new(Box::new(StubEncoder::new(seed + stub_offset)), cache));
    }
    let http = http?;
    if config.offline {
        return cache.map(|c| EmbeddingStore::offline(http.model.clone(), c));
    }
    Some(EmbeddingStore::new(Box::new(HttpEncoder::new(http.clone())), cache))
}

/// Builds the embedding stores a config asks for.
pub fn encoders_for(config: &EmbeddingConfig) -> Encoders {
    Encoders {
        sentence_transformer: encoder_store(config, config.sentence_transformer.as_ref(), 0),
        llm_embeddings: encoder_store(config, config.llm_embeddings.as_ref(), 1),
    }
}

pub struct Pipeline {
    config: RunConfig,
    strategy: Strategy,
    priority: SourcePriority,
    clock: Box<dyn Clock>,
    validator: Box<dyn Validator>,
    encoders: Encoders,
    keep_going: bool,
}

impl Pipeline {
    /// Validates `config` and the strategy it names. Every configuration
    /// problem surfaces here, before any matching work.
    pub fn new(config: RunConfig) -> Result<Self, PipelineError> {
        config.check()?;
        let text = std::fs::read_to_string(&config.strategy)
            .map_err(|e| PipelineError::Config(format!("{}: {e}", config.strategy.display())))?;
        let known: Vec<SourceId> = config.catalog_files()?.into_keys().collect();
        let strategy = Strategy::parse_checked(&text, &known)
            .map_err(|e| PipelineError::Config(format!("{}: {e}", config.strategy.display())))?;
        if let Some(error) = validate_strategy(&strategy, &known).into_iter().find(|d| d.level == Level::Error) {
            return Err(PipelineError::Config(error.to_string()));
        }
        let validator: Box<dyn Validator> = match config.validator {
            ValidatorChoice::Rule => Box::new(RuleValidator::new(config.validation.rule_threshold)),
            ValidatorChoice::Llm => {
                let llm = config.llm.clone().expect("checked");
                let transport = HttpChatTransport::new(llm).map_err(|e| PipelineError::Config(format!("llm audit log: {e}")))?;
                Box::new(LlmValidator::new(transport))
            }
        };
        let clock: Box<dyn Clock> = match config.clock_start.as_deref() {
            Some(start) => Box::new(FixedClock::parse(start).expect("checked")),
            None => Box::new(SystemClock),
        };
        Ok(Self {
            priority: config.priority()?,
            encoders: encoders_for(&config.embeddings),
            strategy,
            clock,
            validator,
            keep_going: false,
            config,
        })
    }

    pub fn with_validator(mut self, validator: Box<dyn Validator>) -> Self {
        self.validator = validator;
        self
    }

    pub fn with_clock(mut self, clock: Box<dyn Clock>) -> Self {
        self.clock = clock;
        self
    }

    pub fn with_encoders(mut self, encoders: Encoders) -> Self {
        self.encoders = encoders;
        self
    }

    /// Continue past a failed strategy line instead of aborting the run.
    pub fn keep_going(mut self, keep_going: bool) -> Self {
        self.keep_going = keep_going;
        self
    }

    pub fn config(&self) -> &RunConfig {
        &self.config
    }

    pub fn strategy(&self) -> &Strategy {
        &self.strategy
    }

    /// Loads the configured catalogs and runs every strategy line.
    pub fn run(&mut self) -> Result<PipelineOutcome, PipelineError> {
        let (catalog, diagnostics) = load_catalog(&self.config)?;
        self.run_on(catalog, diagnostics)
    }

    /// Runs every strategy line over an already loaded catalog.
    pub fn run_on(&mut self, catalog: Catalog, mut diagnostics: Vec<Diagnostic>) -> Result<PipelineOutcome, PipelineError> {
        let started = Instant::now();
        let mut registry = SetRegistry::new(&catalog);
        let mut records = Vec::new();
        let mut report = RunReport {
            mapping_tool: self.config.mapping_tool.clone(),
            entities: catalog.len(),
            ..RunReport::default()
        };
        for source in catalog.sources() {
            report.sources.insert(source.to_string(), catalog.by_source(&source).len());
        }

        let lines = self.strategy.lines.clone();
        for line in &lines {
            let line_started = Instant::now();
            // A line either commits all its merges and records or none.
            let mut line_registry = registry.clone();
            let mut line_records = Vec::new();
            let mut line_diagnostics = Vec::new();
            let result = self.run_line(line, &catalog, &mut line_registry, &mut line_records, &mut line_diagnostics);
            let mut line_report = match result {
                Ok(r) => {
                    registry = line_registry;
                    records.append(&mut line_records);
                    r
                }
                Err(e) => {
                    let e = PipelineError::Line {
                        line_no: line.line_no,
                        line: line.to_string(),
                        source: Box::new(e),
                    };
                    if !self.keep_going {
                        return Err(e);
                    }
                    log::error!("{e}");
                    line_diagnostics.push(Diagnostic::error("pipeline.line_failed", e.to_string()));
                    let mut r = LineReport::new(line.line_no, line.to_string());
                    r.status = LineStatus::Failed;
                    r.error = Some(e.to_string());
                    r
                }
            };
            line_report.wall_time_ms = line_started.elapsed().as_secs_f64() * 1e3;
            diagnostics.append(&mut line_diagnostics);
            report.lines.push(line_report);
        }

        sort_records(&mut records);
        let published = PublishedSets::new(&catalog, &registry, &self.priority);
        let (dictionary, resolver_diags) = emit_resolver_json(&catalog, &published);
        diagnostics.extend(resolver_diags);
        let outputs = Outputs {
            sssom: emit_sssom(&records).map_err(|e| PipelineError::Data(e.to_string()))?,
            sssom_tsv: emit_sssom_tsv(&records).map_err(|e| PipelineError::Data(e.to_string()))?,
            resolver_json: dictionary.to_json(),
            facilities_csv: emit_ivoa_csv(&catalog, &published),
            linked_catalog: emit_linked_catalog(&catalog, &registry),
        };

        for l in &report.lines {
            report.validator_calls += l.validation.validator_calls;
            report.accepted += l.validation.accepted;
            report.rejected += l.validation.rejected;
            report.deferred += l.validation.deferred;
            report.lines_stopped_by_streak += usize::from(l.validation.stopped_by_streak);
            report.failed_lines += usize::from(l.status == LineStatus::Failed);
        }
        report.synonym_sets = published.sets.len();
        report.merged_sets = published.sets.iter().filter(|s| s.members.len() > 1).count();
        report.records = records.len();
        report.diagnostics = DiagnosticCounts::of(&diagnostics);
        report.wall_time_ms = started.elapsed().as_secs_f64() * 1e3;

        Ok(PipelineOutcome {
            catalog,
            registry,
            records,
            outputs,
            report,
            diagnostics,
        })
    }

    fn run_line(
        &mut self,
        line: &StrategyLine,
        catalog: &Catalog,
        registry: &mut SetRegistry,
        records: &mut Vec<MappingRecord>,
        diagnostics: &mut Vec<Diagnostic>,
    ) -> Result<LineReport, PipelineError> {
        let mut report = LineReport::new(line.line_no, line.to_string());
        let tool = self.config.mapping_tool.as_str();
        let filter = line.type_filter.as_ref();
        let left_all = catalog.by_source(&line.source_a);
        let right_all = catalog.by_source(&line.source_b);
        let lefts = filter_list(catalog, &left_all, filter);
        let rights = filter_list(catalog, &right_all, filter);
        report.left_entities = lefts.len();
        report.right_entities = rights.len();

        let (id_matches, id_diags) = resolve_external_ids(catalog, &lefts, &rights);
        diagnostics.extend(id_diags);
        for m in id_matches {
            if registry.same_set(m.left, m.right) {
                continue;
            }
            registry.merge(m.left, m.right);
            let (l, r) = (catalog.get(m.left), catalog.get(m.right));
            records.push(MappingRecord::external_id(l.id.clone(), r.id.clone(), &m.schemes, self.clock.now(), tool));
            report.external_id_matches += 1;
        }

        let mut pairs = generate_pairs(catalog, registry, &left_all, &right_all, filter);
        report.candidate_pairs = pairs.len();
        let profiles = build_profiles(catalog, registry);
        let criteria = line.criteria();
        pairs.par_iter_mut().for_each(|pair| {
            let (l, r) = sides(catalog, &profiles, pair);
            pair.apply_criteria(&criteria, l, r);
        });

        // One automatic match per entity and line; further label matches
        // of the same entity go through scoring and validation instead.
        let mut matched: HashSet<EntityRef> = HashSet::new();
        for pair in pairs.iter_mut() {
            match pair.status {
                PairStatus::Filtered => report.filtered += 1,
                PairStatus::AutoAccepted => {
                    report.auto_accepted += 1;
                    if registry.same_set(pair.left, pair.right) {
                        continue;
                    }
                    if matched.contains(&pair.left) || matched.contains(&pair.right) {
                        diagnostics.push(Diagnostic::warning(
                            "match.ambiguous_label",
                            format!(
                                "{} / {}: label match on an entity already matched on this line; sent to validation",
                                catalog.get(pair.left).id,
                                catalog.get(pair.right).id
                            ),
                        ));
                        report.auto_accepted -= 1;
                        pair.status = PairStatus::Pending;
                        continue;
                    }
                    matched.insert(pair.left);
                    matched.insert(pair.right);
                    registry.merge(pair.left, pair.right);
                    let (l, r) = (catalog.get(pair.left), catalog.get(pair.right));
                    records.push(MappingRecord::label_match(l.id.clone(), r.id.clone(), self.clock.now(), tool));
                }
                _ => {}
            }
        }

        let kinds = line.scores();
        if !kinds.is_empty() {
            let mut corpus: Vec<EntityRef> = lefts.iter().chain(&rights).copied().collect();
            corpus.sort_unstable();
            corpus.dedup();
            let (scorer, score_diags) = PairScorer::prepare(&kinds, &profiles, &corpus, &self.encoders);
            diagnostics.extend(score_diags);
            let weights = &self.config.weights;
            pairs.par_iter_mut().filter(|p| p.status == PairStatus::Pending).for_each(|pair| {
                pair.scores = scorer.score(pair.left, pair.right);
                pair.global_score = global_score(&pair.scores, weights);
            });
            report.scored = pairs.iter().filter(|p| p.global_score.is_some()).count();
        }

        let outcome = run_validation_loop(
            catalog,
            &mut pairs,
            self.validator.as_mut(),
            &self.config.validation,
            registry,
            self.clock.as_ref(),
            tool,
        );
        let stats = &outcome.stats;
        if stats.transport_failures > 0 && stats.accepted + stats.rejected == 0 {
            return Err(PipelineError::Transport(format!(
                "validator unreachable: {} of {} calls failed",
                stats.transport_failures, stats.validator_calls
            )));
        }
        diagnostics.extend(outcome.diagnostics);
        records.extend(outcome.records);
        report.validation = outcome.stats;
        report.records = records.len();
        Ok(report)
    }
}
