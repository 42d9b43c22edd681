//! Curation patches: per-entity field overrides applied after loading.
//!
//! A patch file is a JSON object keyed by `source:slug`; each value is a
//! partial record whose keys replace the entity's fields. A `null` value
//! clears the field.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use serde_json::{Map, Value};

use super::record::{entity_from_value, entity_to_value};
use super::IngestError;
use crate::diagnostics::Diagnostic;
use crate::model::{Catalog, EntityId};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PatchSet {
    overrides: BTreeMap<EntityId, Map<String, Value>>,
}

impl PatchSet {
    pub fn from_json(text: &str) -> Result<Self, IngestError> {
        let value: Value = serde_json::from_str(text).map_err(|e| IngestError::Patch(e.to_string()))?;
        let object = value
            .as_object()
            .ok_or_else(|| IngestError::Patch("expected an object keyed by entity id".into()))?;
        let mut overrides = BTreeMap::new();
        for (key, fields) in object {
            let id: EntityId = key.parse().map_err(|e: crate::model::ModelError| IngestError::Patch(e.to_string()))?;
            let fields = fields
                .as_object()
                .ok_or_else(|| IngestError::Patch(format!("{key}: expected an object of field overrides")))?;
            for forbidden in ["uri", "source"] {
                if fields.contains_key(forbidden) {
                    return Err(IngestError::Patch(format!("{key}: `{forbidden}` cannot be patched")));
                }
            }
            overrides.insert(id, fields.clone());
        }
        Ok(Self { overrides })
    }

    pub fn load(path: &Path) -> Result<Self, IngestError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn len(&self) -> usize {
        self.overrides.len()
    }

    pub fn is_empty(&self) -> bool {
        self.overrides.is_empty()
    }

    /// Applies every override; ids missing from the catalog are reported.
    pub fn apply(&self, catalog: &mut Catalog) -> Result<Vec<Diagnostic>, IngestError> {
        let mut diagnostics = Vec::new();
        for (id, fields) in &self.overrides {
            let Some(at) = catalog.lookup(id) else {
                diagnostics.push(Diagnostic::warning("patch.unknown_entity", format!("patch targets unknown entity {id}")));
                continue;
            };
            let entity = catalog.get(at);
            let mut record = entity_to_value(entity);
            let map = record.as_object_mut().expect("records are objects");
            for (key, value) in fields {
                if value.is_null() {
                    map.remove(key);
                } else {
                    map.insert(key.clone(), value.clone());
                }
            }
            let patched = entity_from_value(&record, 0, Some(id.source()), &HashSet::new())?;
            *catalog.get_mut(at) = patched;
        }
        Ok(diagnostics)
    }
}
