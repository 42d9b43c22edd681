//! Provenance for one accepted mapping.

use std::collections::BTreeMap;
use std::fmt;

use chrono::NaiveDateTime;
use serde::Serialize;
use thiserror::Error;
use uuid::Uuid;

use crate::model::{EntityId, IdScheme};
use crate::scoring::ScoreKind;
use crate::validate::Verdict;

pub const EXACT_MATCH: &str = "skos:exactMatch";
pub const LEXICAL_MATCHING: &str = "semapv:LexicalMatching";
pub const DEFAULT_MAPPING_TOOL: &str = concat!("facmatch/", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SimilarityMeasure {
    /// Accepted by the label-match criterion.
    LabelMatch,
    /// Accepted by a validator after scoring.
    WeightedSum,
    /// Accepted through shared external identifiers.
    ExternalId,
}

impl SimilarityMeasure {
    pub fn as_str(self) -> &'static str {
        match self {
            SimilarityMeasure::LabelMatch => "label_match",
            SimilarityMeasure::WeightedSum => "weighted_sum",
            SimilarityMeasure::ExternalId => "external_id",
        }
    }
}

impl fmt::Display for SimilarityMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("mapping {id}: {violation}")]
pub struct RecordError {
    pub id: Uuid,
    pub violation: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MappingRecord {
    pub id: Uuid,
    pub subject_id: EntityId,
    pub object_id: EntityId,
    pub predicate_id: String,
    pub similarity_measure: SimilarityMeasure,
    pub similarity_score: f64,
    /// Record field name → value, e.g. `levenshtein_similarity`.
    pub scores: BTreeMap<String, f64>,
    pub mapping_date: NaiveDateTime,
    pub mapping_tool: String,
    pub reviewer_label: Option<String>,
    pub justification: Option<String>,
    pub comment: Option<String>,
}

impl MappingRecord {
    /// Name-based UUID of the ordered pair.
    pub fn record_id(subject: &EntityId, object: &EntityId) -> Uuid {
        Uuid::new_v5(&Uuid::NAMESPACE_URL, format!("{subject}|{object}").as_bytes())
    }

    fn base(subject: EntityId, object: EntityId, measure: SimilarityMeasure, date: NaiveDateTime, tool: &str) -> Self {
        Self {
            id: Self::record_id(&subject, &object),
            subject_id: subject,
            object_id: object,
            predicate_id: EXACT_MATCH.to_owned(),
            similarity_measure: measure,
            similarity_score: 1.0,
            scores: BTreeMap::new(),
            mapping_date: date,
            mapping_tool: tool.to_owned(),
            reviewer_label: None,
            justification: None,
            comment: None,
        }
    }

    pub fn label_match(subject: EntityId, object: EntityId, date: NaiveDateTime, tool: &str) -> Self {
        let mut r = Self::base(subject, object, SimilarityMeasure::LabelMatch, date, tool);
        r.scores.insert("label_match".into(), 1.0);
        r
    }

    pub fn external_id(
        subject: EntityId,
        object: EntityId,
        schemes: &[IdScheme],
        date: NaiveDateTime,
        tool: &str,
    ) -> Self {
        let mut r = Self::base(subject, object, SimilarityMeasure::ExternalId, date, tool);
        let names: Vec<&str> = schemes.iter().map(|s| s.as_str()).collect();
        r.comment = Some(format!("shared identifier: {}", names.join(", ")));
        r
    }

    pub fn weighted_sum(
        subject: EntityId,
        object: EntityId,
        scores: &BTreeMap<ScoreKind, f64>,
        global: f64,
        verdict: &Verdict,
        date: NaiveDateTime,
        tool: &str,
    ) -> Self {
        let mut r = Self::base(subject, object, SimilarityMeasure::WeightedSum, date, tool);
        r.similarity_score = global;
        r.scores = scores.iter().map(|(k, v)| (k.record_field().to_owned(), *v)).collect();
        r.scores.insert("weighted_sum".into(), global);
        r.reviewer_label = Some(verdict.reviewer_label.clone());
        r.justification = Some(LEXICAL_MATCHING.to_owned());
        r.comment = Some(verdict.justification.clone());
        r
    }

    pub fn check(&self) -> Result<(), RecordError> {
        let fail = |violation| Err(RecordError { id: self.id, violation });
        match self.similarity_measure {
            SimilarityMeasure::LabelMatch | SimilarityMeasure::ExternalId => {
                if self.similarity_score != 1.0 {
                    return fail("label and identifier matches must score 1");
                }
                if self.reviewer_label.is_some() {
                    return fail("label and identifier matches carry no reviewer");
                }
            }
            SimilarityMeasure::WeightedSum => {
                if self.reviewer_label.as_deref().is_none_or(str::is_empty) {
                    return fail("weighted_sum mappings need a reviewer_label");
                }
                if self.comment.as_deref().is_none_or(|c| c.trim().is_empty()) {
                    return fail("weighted_sum mappings need a justification comment");
                }
            }
        }
        if !self.similarity_score.is_finite() || self.scores.values().any(|v| !v.is_finite()) {
            return fail("scores must be finite");
        }
        Ok(())
    }
}

/// Records ordered by mapping date, then id.
pub fn sort_records(records: &mut [MappingRecord]) {
    records.sort_by(|a, b| a.mapping_date.cmp(&b.mapping_date).then_with(|| a.id.cmp(&b.id)));
}
