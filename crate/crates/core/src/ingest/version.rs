//! Snapshot comparison: which records were added, changed or disappeared.

use std::collections::{BTreeSet, HashMap};

use chrono::NaiveDateTime;
use serde::Serialize;

use super::{CatalogSnapshot, IngestError};
use crate::model::EntityId;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct VersionDelta {
    pub added: BTreeSet<EntityId>,
    pub modified: BTreeSet<EntityId>,
    pub deprecated: BTreeSet<EntityId>,
}

impl VersionDelta {
    pub fn is_empty(&self) -> bool {
        self.added.is_empty() && self.modified.is_empty() && self.deprecated.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct VersionUpdate {
    pub delta: VersionDelta,
    /// The new snapshot with refreshed `modified` stamps, followed by the
    /// records that disappeared, flagged deprecated.
    pub snapshot: CatalogSnapshot,
}

/// Compares two snapshots of one source.
///
/// Changed records are stamped `now`; unchanged ones keep their previous
/// stamp; records missing from `new` are kept with `deprecated = true`.
pub fn diff_snapshots(
    old: &CatalogSnapshot,
    new: &CatalogSnapshot,
    now: NaiveDateTime,
) -> Result<VersionUpdate, IngestError> {
    if old.source != new.source {
        return Err(IngestError::SourceMismatch {
            expected: old.source.to_string(),
            found: new.source.to_string(),
        });
    }
    let previous: HashMap<&EntityId, _> = old.records.iter().map(|e| (&e.id, e)).collect();
    let current: BTreeSet<&EntityId> = new.records.iter().map(|e| &e.id).collect();

    let mut delta = VersionDelta::default();
    let mut records = Vec::with_capacity(new.records.len());
    for record in &new.records {
        let mut record = record.clone();
        match previous.get(&record.id) {
            Some(before) if before.same_content(&record) => {
                record.modified = before.modified;
            }
            Some(_) => {
                record.modified = Some(now);
                delta.modified.insert(record.id.clone());
            }
            None => {
                record.modified = Some(now);
                delta.added.insert(record.id.clone());
            }
        }
        records.push(record);
    }
    for record in &old.records {
        if current.contains(&record.id) {
            continue;
        }
        let mut record = record.clone();
        if !record.deprecated {
            record.deprecated = true;
            record.modified = Some(now);
        }
        delta.deprecated.insert(record.id.clone());
        records.push(record);
    }
    Ok(VersionUpdate {
        delta,
        snapshot: CatalogSnapshot {
            source: new.source.clone(),
            fetched_at: new.fetched_at.or(Some(now)),
            records,
        },
    })
}
