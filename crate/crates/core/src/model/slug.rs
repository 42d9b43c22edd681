//! Human-readable URI slugs derived from labels.

use std::collections::HashSet;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SlugError {
    #[error("label {0:?} has no sluggable characters and no fallback identifier")]
    Unsluggable(String),
}

/// Lowercases, maps whitespace and `/` to `-`, drops everything outside
/// `[a-z0-9.-]`, collapses hyphen runs and trims hyphens at both ends.
pub fn slug_base(label: &str) -> String {
    let mut out = String::with_capacity(label.len());
    for c in label.chars().flat_map(char::to_lowercase) {
        let mapped = if c.is_whitespace() || c == '/' {
            '-'
        } else if c.is_ascii_lowercase() || c.is_ascii_digit() || c == '.' || c == '-' {
            c
        } else {
            continue;
        };
        if mapped == '-' && (out.is_empty() || out.ends_with('-')) {
            continue;
        }
        out.push(mapped);
    }
    while out.ends_with('-') {
        out.pop();
    }
    out
}

/// Slug for `label` that is not yet in `taken`.
///
/// Collisions are resolved by appending the source-native identifier when
/// one is given, then a numeric suffix.
pub fn slugify(
    label: &str,
    taken: &HashSet<String>,
    fallback_id: Option<&str>,
) -> Result<String, SlugError> {
    let fallback = fallback_id.map(slug_base).filter(|s| !s.is_empty());
    let base = match slug_base(label) {
        b if !b.is_empty() => b,
        _ => fallback
            .clone()
            .ok_or_else(|| SlugError::Unsluggable(label.to_owned()))?,
    };
    if !taken.contains(&base) {
        return Ok(base);
    }
    if let Some(fallback) = fallback.as_deref().filter(|f| *f != base) {
        let candidate = format!("{base}-{fallback}");
        if !taken.contains(&candidate) {
            return Ok(candidate);
        }
    }
    (2..)
        .map(|n| format!("{base}-{n}"))
        .find(|candidate| !taken.contains(candidate))
        .ok_or_else(|| SlugError::Unsluggable(label.to_owned()))
}
