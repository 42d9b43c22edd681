//! Read-only name resolution over the resolver dictionary.

pub mod index;
pub mod service;

use std::path::Path;

use thiserror::Error;

use crate::diagnostics::Diagnostic;
use crate::emit::{read_ivoa_csv, ResolverDictionary};

pub use index::{AliasEntry, AliasesResponse, NameIndex, ResolveHit, ResolverIndex, TRIGRAM_FLOOR};
pub use service::{router, serve, ResolverHandle};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: invalid dictionary: {source}")]
    Dictionary { path: String, source: serde_json::Error },
    #[error("{path}: invalid facilities CSV: {source}")]
    Csv { path: String, source: csv::Error },
}

/// Builds an index from a dictionary file and an optional facilities CSV.
pub fn load_index(dictionary: &Path, facilities: Option<&Path>) -> Result<(ResolverIndex, Vec<Diagnostic>), LoadError> {
    let path = dictionary.display().to_string();
    let text = std::fs::read_to_string(dictionary).map_err(|source| LoadError::Io { path: path.clone(), source })?;
    let dict = ResolverDictionary::from_json(&text).map_err(|source| LoadError::Dictionary { path, source })?;
    let rows = match facilities {
        Some(p) => {
            let path = p.display().to_string();
            let file = std::fs::File::open(p).map_err(|source| LoadError::Io { path: path.clone(), source })?;
            Some(read_ivoa_csv(file).map_err(|source| LoadError::Csv { path, source })?)
        }
        None => None,
    };
    Ok(ResolverIndex::build(&dict, rows.as_deref()))
}
