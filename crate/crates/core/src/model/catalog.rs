use std::collections::HashMap;

use super::{Entity, EntityId, ModelError, SourceId};

/// Position of an entity inside a [`Catalog`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
#[serde(transparent)]
pub struct EntityRef(pub usize);

impl EntityRef {
    pub fn index(self) -> usize {
        self.0
    }
}

/// All entities of a run, addressable by id or by position.
///
/// Entities are only appended; an [`EntityRef`] stays valid for the
/// lifetime of the catalog.
#[derive(Debug, Clone, Default)]
pub struct Catalog {
    entities: Vec<Entity>,
    by_id: HashMap<EntityId, EntityRef>,
}

impl Catalog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entities(entities: impl IntoIterator<Item = Entity>) -> Result<Self, ModelError> {
        let mut catalog = Self::new();
        for entity in entities {
            catalog.insert(entity)?;
        }
        Ok(catalog)
    }

    pub fn insert(&mut self, entity: Entity) -> Result<EntityRef, ModelError> {
        if self.by_id.contains_key(&entity.id) {
            return Err(ModelError::DuplicateEntity(entity.id));
        }
        let at = EntityRef(self.entities.len());
        self.by_id.insert(entity.id.clone(), at);
        self.entities.push(entity);
        Ok(at)
    }

    pub fn len(&self) -> usize {
        self.entities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty()
    }

    pub fn get(&self, at: EntityRef) -> &Entity {
        &self.entities[at.0]
    }

    pub fn get_mut(&mut self, at: EntityRef) -> &mut Entity {
        &mut self.entities[at.0]
    }

    pub fn lookup(&self, id: &EntityId) -> Option<EntityRef> {
        self.by_id.get(id).copied()
    }

    pub fn entity(&self, id: &EntityId) -> Option<&Entity> {
        self.lookup(id).map(|at| self.get(at))
    }

    pub fn iter(&self) -> impl Iterator<Item = (EntityRef, &Entity)> {
        self.entities
            .iter()
            .enumerate()
            .map(|(i, e)| (EntityRef(i), e))
    }

    pub fn entities(&self) -> &[Entity] {
        &self.entities
    }

    pub fn into_entities(self) -> Vec<Entity> {
        self.entities
    }

    /// Refs of one source, in id order.
    pub fn by_source(&self, source: &SourceId) -> Vec<EntityRef> {
        let mut refs: Vec<EntityRef> = self
            .iter()
            .filter(|(_, e)| e.source() == source)
            .map(|(at, _)| at)
            .collect();
        refs.sort_by(|a, b| self.get(*a).id.cmp(&self.get(*b).id));
        refs
    }

    /// Distinct sources present, sorted.
    pub fn sources(&self) -> Vec<SourceId> {
        let mut sources: Vec<SourceId> = self.entities.iter().map(|e| e.source().clone()).collect();
        sources.sort();
        sources.dedup();
        sources
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicate_ids() {
        let mut c = Catalog::new();
        c.insert(Entity::new("aas:a".parse().unwrap(), "A")).unwrap();
        let err = c.insert(Entity::new("aas:a".parse().unwrap(), "A again")).unwrap_err();
        assert!(matches!(err, ModelError::DuplicateEntity(_)));
        c.insert(Entity::new("pds:a".parse().unwrap(), "A")).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.sources().len(), 2);
    }
}
