//! Output documents: SSSOM mappings, resolver dictionary, meronymy CSV and
//! the linked catalog. Every emitter is a pure function of its inputs.

pub mod ivoa_csv;
pub mod linked;
pub mod record;
pub mod resolver_json;
pub mod sssom;

use std::collections::HashSet;

use crate::model::{slugify, Catalog, EntityRef, SetRegistry, SourcePriority, SynonymSet};

pub use ivoa_csv::{emit_ivoa_csv, read_ivoa_csv, FacilityRow};
pub use linked::emit_linked_catalog;
pub use record::{MappingRecord, RecordError, SimilarityMeasure, DEFAULT_MAPPING_TOOL};
pub use resolver_json::{emit_resolver_json, ResolverDictionary};
pub use sssom::{emit_sssom, emit_sssom_tsv};

/// Synonym sets with their canonical slugs.
#[derive(Debug, Clone)]
pub struct PublishedSets {
    /// In representative-id order.
    pub sets: Vec<SynonymSet>,
    /// Canonical slug of each set, parallel to `sets`.
    pub slugs: Vec<String>,
    set_of: Vec<usize>,
}

impl PublishedSets {
    /// Slugs come from preferred labels. Sets whose label comes from a
    /// more trusted source claim their slug first; ties in set order.
    pub fn new(catalog: &Catalog, registry: &SetRegistry, priority: &SourcePriority) -> Self {
        let sets = registry.synonym_sets(catalog, priority);
        let mut claim_order: Vec<usize> = (0..sets.len()).collect();
        claim_order.sort_by_key(|&i| (priority.rank(&sets[i].pref_source), i));
        let mut taken = HashSet::new();
        let mut slugs = vec![String::new(); sets.len()];
        for i in claim_order {
            let set = &sets[i];
            let representative = catalog.get(set.representative);
            let slug = slugify(&set.pref_label, &taken, Some(set.pref_source.as_str()))
                .or_else(|_| slugify(representative.id.slug(), &taken, None))
                .unwrap_or_else(|_| format!("set-{i}"));
            taken.insert(slug.clone());
            slugs[i] = slug;
        }
        let mut set_of = vec![0; catalog.len()];
        for (i, set) in sets.iter().enumerate() {
            for m in &set.members {
                set_of[m.0] = i;
            }
        }
        Self { sets, slugs, set_of }
    }

    pub fn set_index(&self, at: EntityRef) -> usize {
        self.set_of[at.0]
    }

    pub fn slug_of(&self, at: EntityRef) -> &str {
        &self.slugs[self.set_of[at.0]]
    }
}
