//! Per-entity matching material, precomputed once per strategy line.
//!
//! A profile is built from the entity and the alias pool of its current
//! synonym set, so aliases gathered in earlier lines take part in later
//! comparisons.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::model::{Catalog, Entity, SetRegistry};
use crate::scoring::digits::{extract_numbers, Number};
use crate::scoring::text::normalize_label;

#[derive(Debug, Clone, PartialEq)]
pub struct EntityProfile {
    /// Labels, alt labels and notations of every set member.
    pub labels: Vec<String>,
    /// `labels` after [`normalize_label`].
    pub normalized: BTreeSet<String>,
    /// Numbers mentioned anywhere in the textual fields.
    pub numbers: Vec<Number>,
    /// Text fed to TF-IDF and embedding encoders.
    pub document: String,
}

impl EntityProfile {
    /// Profile of a lone entity.
    pub fn of(entity: &Entity) -> Self {
        Self::with_pool(entity, entity.labels().map(str::to_owned).collect())
    }

    pub fn with_pool(entity: &Entity, pool: BTreeSet<String>) -> Self {
        let mut labels: Vec<String> = Vec::with_capacity(pool.len());
        labels.push(entity.pref_label.clone());
        labels.extend(pool.into_iter().filter(|l| *l != entity.pref_label));
        let normalized = labels.iter().map(|l| normalize_label(l)).filter(|l| !l.is_empty()).collect();
        let document = document_text(entity, &labels);
        let numbers = extract_numbers(&document);
        Self {
            labels,
            normalized,
            numbers,
            document,
        }
    }
}

/// Labels, then description and location name, space-joined.
pub fn document_text(entity: &Entity, labels: &[String]) -> String {
    let mut parts: Vec<&str> = labels.iter().map(String::as_str).collect();
    parts.extend(entity.description.as_deref());
    parts.extend(entity.location_name.as_deref());
    parts.join(" ")
}

/// Profiles for every catalog entity under the current set registry,
/// indexed by [`crate::EntityRef`].
pub fn build_profiles(catalog: &Catalog, registry: &SetRegistry) -> Vec<EntityProfile> {
    let pools = registry.alias_pools(catalog);
    catalog
        .entities()
        .par_iter()
        .zip(pools.into_par_iter())
        .map(|(entity, pool)| EntityProfile::with_pool(entity, pool))
        .collect()
}
