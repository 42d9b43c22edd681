//! Pair similarity scores and their weighted combination.
//!
//! Surface scores compare label strings ([`levenshtein`], [`digits`],
//! [`acronym`]); semantic scores compare entity documents ([`tfidf`],
//! [`embedding`]). A score is either a value in [0, 1] or inapplicable,
//! and inapplicable scores drop out of the [`global`] mean.

pub mod acronym;
pub mod cosine;
pub mod digits;
pub mod embedding;
pub mod global;
pub mod levenshtein;
pub mod text;
pub mod tfidf;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::diagnostics::Diagnostic;
use crate::model::EntityRef;
use crate::profile::EntityProfile;

pub use acronym::{acronym_probability, pair_acronym};
pub use cosine::{cosine, sparse_cosine};
pub use digits::{digits_match, digits_ratio, extract_numbers, Number};
pub use embedding::{EmbeddingCache, EmbeddingEncoder, EmbeddingStore, EncoderError, HttpEncoder, StubEncoder};
pub use global::{global_score, ScoreWeights};
pub use levenshtein::{levenshtein_similarity, pair_levenshtein};
pub use tfidf::{SparseVector, TfidfModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ScoreKind {
    #[serde(rename = "levenshtein")]
    Levenshtein,
    #[serde(rename = "tfidf")]
    Tfidf,
    #[serde(rename = "digit")]
    Digits,
    #[serde(rename = "acronym")]
    Acronym,
    #[serde(rename = "sentence_transformer")]
    SentenceTransformer,
    #[serde(rename = "llm_embeddings")]
    LlmEmbeddings,
}

impl ScoreKind {
    pub const ALL: [ScoreKind; 6] = [
        ScoreKind::Levenshtein,
        ScoreKind::Tfidf,
        ScoreKind::Digits,
        ScoreKind::Acronym,
        ScoreKind::SentenceTransformer,
        ScoreKind::LlmEmbeddings,
    ];

    /// Step name in strategy files.
    pub fn as_str(self) -> &'static str {
        match self {
            ScoreKind::Levenshtein => "levenshtein",
            ScoreKind::Tfidf => "tfidf",
            ScoreKind::Digits => "digit",
            ScoreKind::Acronym => "acronym",
            ScoreKind::SentenceTransformer => "sentence_transformer",
            ScoreKind::LlmEmbeddings => "llm_embeddings",
        }
    }

    /// Field name in mapping records.
    pub fn record_field(self) -> &'static str {
        match self {
            ScoreKind::Levenshtein => "levenshtein_similarity",
            ScoreKind::Tfidf => "tfidf_cosine_similarity",
            ScoreKind::Digits => "digits_match",
            ScoreKind::Acronym => "acronym_probability",
            ScoreKind::SentenceTransformer => "sentence_transformer_cosine_similarity",
            ScoreKind::LlmEmbeddings => "llm_embeddings_cosine_similarity",
        }
    }

    pub fn is_embedding(self) -> bool {
        matches!(self, ScoreKind::SentenceTransformer | ScoreKind::LlmEmbeddings)
    }
}

impl fmt::Display for ScoreKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScoreKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "levenshtein" | "levenshtein_similarity" => ScoreKind::Levenshtein,
            "tfidf" | "tf_idf" | "tf-idf" | "tfidf_cosine_similarity" => ScoreKind::Tfidf,
            "digit" | "digits" | "digits_match" => ScoreKind::Digits,
            "acronym" | "acronym_probability" => ScoreKind::Acronym,
            "sentence_transformer" => ScoreKind::SentenceTransformer,
            "llm_embeddings" => ScoreKind::LlmEmbeddings,
            other => return Err(format!("unknown score {other:?}")),
        })
    }
}

/// Encoders for the two embedding scores; either may be missing.
#[derive(Default)]
pub struct Encoders {
    pub sentence_transformer: Option<EmbeddingStore>,
    pub llm_embeddings: Option<EmbeddingStore>,
}

impl Encoders {
    pub fn get(&self, kind: ScoreKind) -> Option<&EmbeddingStore> {
        match kind {
            ScoreKind::SentenceTransformer => self.sentence_transformer.as_ref(),
            ScoreKind::LlmEmbeddings => self.llm_embeddings.as_ref(),
            _ => None,
        }
    }
}

/// Everything needed to score pairs among a fixed set of entities.
pub struct PairScorer<'a> {
    kinds: Vec<ScoreKind>,
    profiles: &'a [EntityProfile],
    tfidf: Vec<Option<SparseVector>>,
    embeddings: BTreeMap<ScoreKind, Vec<Option<Vec<f64>>>>,
}

impl<'a> PairScorer<'a> {
    /// Fits TF-IDF on the documents of `corpus` and encodes them for the
    /// requested embedding scores. Embedding scores whose encoder is
    /// missing or fails are dropped with a diagnostic.
    pub fn prepare(
        kinds: &[ScoreKind],
        profiles: &'a [EntityProfile],
        corpus: &[EntityRef],
        encoders: &Encoders,
    ) -> (Self, Vec<Diagnostic>) {
        let mut diagnostics = Vec::new();
        let mut active: Vec<ScoreKind> = Vec::new();
        let mut tfidf = vec![None; profiles.len()];
        let mut embeddings = BTreeMap::new();
        for &kind in kinds {
            if active.contains(&kind) {
                continue;
            }
            match kind {
                ScoreKind::Tfidf => {
                    let model = TfidfModel::fit(corpus.iter().map(|r| profiles[r.0].document.as_str()));
                    for r in corpus {
                        let v = model.vectorize(&profiles[r.0].document);
                        if v.is_empty() {
                            diagnostics.push(Diagnostic::info(
                                "score.tfidf_empty",
                                format!("entity #{} has no weighted tokens; tf-idf scores 0", r.0),
                            ));
                        }
                        tfidf[r.0] = Some(v);
                    }
                }
                k if k.is_embedding() => {
                    let Some(store) = encoders.get(k) else {
                        diagnostics.push(Diagnostic::warning(
                            "score.encoder_missing",
                            format!("no encoder configured for {k}; score skipped"),
                        ));
                        continue;
                    };
                    let texts: Vec<String> = corpus.iter().map(|r| profiles[r.0].document.clone()).collect();
                    match store.embed(&texts) {
                        Ok(vectors) => {
                            let mut slots = vec![None; profiles.len()];
                            for (r, v) in corpus.iter().zip(vectors) {
                                slots[r.0] = Some(v);
                            }
                            embeddings.insert(k, slots);
                        }
                        Err(e) => {
                            diagnostics.push(Diagnostic::warning(
                                "score.encoder_failed",
                                format!("{k} encoder {}: {e}; score skipped", store.model_id()),
                            ));
                            continue;
                        }
                    }
                }
                _ => {}
            }
            active.push(kind);
        }
        (
            Self {
                kinds: active,
                profiles,
                tfidf,
                embeddings,
            },
            diagnostics,
        )
    }

    pub fn kinds(&self) -> &[ScoreKind] {
        &self.kinds
    }

    /// Applicable scores for one pair.
    pub fn score(&self, left: EntityRef, right: EntityRef) -> BTreeMap<ScoreKind, f64> {
        let (l, r) = (&self.profiles[left.0], &self.profiles[right.0]);
        let mut out = BTreeMap::new();
        for &kind in &self.kinds {
            let value = match kind {
                ScoreKind::Levenshtein => Some(pair_levenshtein(l, r)),
                ScoreKind::Digits => digits_match(l, r),
                ScoreKind::Acronym => Some(pair_acronym(l, r)),
                ScoreKind::Tfidf => match (&self.tfidf[left.0], &self.tfidf[right.0]) {
                    (Some(u), Some(v)) => Some(tfidf::tfidf_cosine(u, v)),
                    _ => None,
                },
                k => {
                    let slots = &self.embeddings[&k];
                    match (&slots[left.0], &slots[right.0]) {
                        (Some(u), Some(v)) => cosine(u, v).ok().map(|c| c.clamp(0.0, 1.0)),
                        _ => None,
                    }
                }
            };
            if let Some(v) = value {
                out.insert(kind, v);
            }
        }
        out
    }
}
