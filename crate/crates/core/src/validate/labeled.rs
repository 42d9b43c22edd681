//! Annotated pair sets: two records plus the ground-truth decision.

use std::collections::HashSet;
use std::io::BufRead;

use serde::Deserialize;

use super::VerdictDecision;
use crate::ingest::{entity_from_value, IngestError};
use crate::matcher::CandidatePair;
use crate::model::{Catalog, Entity, EntityId};

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledPair {
    pub left: Entity,
    pub right: Entity,
    pub label: VerdictDecision,
}

#[derive(Deserialize)]
struct RawPair {
    left: serde_json::Value,
    right: serde_json::Value,
    label: VerdictDecision,
}

/// One `{"left": record, "right": record, "label": "same"|"distinct"}`
/// object per line; records use the canonical record format and must name
/// their source.
pub fn read_labeled_pairs<R: BufRead>(reader: R) -> Result<Vec<LabeledPair>, IngestError> {
    let mut out = Vec::new();
    let taken = HashSet::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let n = i + 1;
        let raw: RawPair = serde_json::from_str(&line).map_err(|e| IngestError::Json {
            line: n,
            message: e.to_string(),
        })?;
        out.push(LabeledPair {
            left: entity_from_value(&raw.left, n, None, &taken)?,
            right: entity_from_value(&raw.right, n, None, &taken)?,
            label: raw.label,
        });
    }
    Ok(out)
}

/// Catalog holding every record once, the annotated pairs as candidates,
/// and the truth table for a replaying validator.
pub fn labeled_candidates(
    pairs: &[LabeledPair],
) -> Result<(Catalog, Vec<CandidatePair>, Vec<(EntityId, EntityId, VerdictDecision)>), crate::model::ModelError> {
    let mut catalog = Catalog::new();
    let mut candidates = Vec::with_capacity(pairs.len());
    let mut truth = Vec::with_capacity(pairs.len());
    for p in pairs {
        let mut slot = |e: &Entity| match catalog.lookup(&e.id) {
            Some(at) => Ok(at),
            None => catalog.insert(e.clone()),
        };
        let (l, r) = (slot(&p.left)?, slot(&p.right)?);
        candidates.push(CandidatePair::new(l, r));
        truth.push((p.left.id.clone(), p.right.id.clone(), p.label));
    }
    Ok((catalog, candidates, truth))
}
