//! Loading catalog snapshots, enriching records and tracking versions.

pub mod enrich;
pub mod patch;
pub mod record;
pub mod version;

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use chrono::NaiveDateTime;
use thiserror::Error;

use crate::model::{Entity, SourceId};

pub use enrich::{
    enrich_entity, find_aperture, parse_label_enrichment, parse_spacecraft_alias, LabelEnrichment,
    SpacecraftAlias,
};
pub use patch::PatchSet;
pub use record::{entity_from_value, entity_to_value, read_records, write_records};
pub use version::{diff_snapshots, VersionDelta, VersionUpdate};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: invalid JSON: {message}")]
    Json { line: usize, message: String },
    #[error("line {line}: field `{field}`: {message}")]
    Field {
        line: usize,
        field: String,
        message: String,
    },
    #[error("duplicate uri {uri} on lines {first_line} and {second_line}")]
    DuplicateUri {
        uri: String,
        first_line: usize,
        second_line: usize,
    },
    #[error("snapshot source mismatch: expected {expected}, found {found}")]
    SourceMismatch { expected: String, found: String },
    #[error("cannot infer a source name from {0}")]
    UnnamedSource(String),
    #[error("patch file: {0}")]
    Patch(String),
}

/// All records of one source at one point in time.
#[derive(Debug, Clone, PartialEq)]
pub struct CatalogSnapshot {
    pub source: SourceId,
    pub fetched_at: Option<NaiveDateTime>,
    pub records: Vec<Entity>,
}

impl CatalogSnapshot {
    pub fn new(source: SourceId) -> Self {
        Self {
            source,
            fetched_at: None,
            records: Vec::new(),
        }
    }
}

/// Reads a snapshot of `source` from a line-delimited record stream.
pub fn load_snapshot<R: BufRead>(reader: R, source: SourceId) -> Result<CatalogSnapshot, IngestError> {
    let records = read_records(reader, Some(&source))?;
    Ok(CatalogSnapshot {
        source,
        fetched_at: None,
        records,
    })
}

/// Reads `<dir>/<source>.jsonl`; the file stem names the source.
pub fn load_snapshot_file(path: &Path) -> Result<CatalogSnapshot, IngestError> {
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .and_then(|s| SourceId::new(s).ok())
        .ok_or_else(|| IngestError::UnnamedSource(path.display().to_string()))?;
    load_snapshot(BufReader::new(File::open(path)?), stem)
}
