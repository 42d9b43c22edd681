//! Part-of (meronymy) traversal over `part_of` edges.

use std::collections::{BTreeSet, VecDeque};

use super::{Catalog, EntityRef};
use crate::diagnostics::Diagnostic;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Toward wholes: what this entity is part of.
    Broader,
    /// Toward parts: what is part of this entity.
    Narrower,
}

impl std::str::FromStr for Direction {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "broader" => Ok(Direction::Broader),
            "narrower" => Ok(Direction::Narrower),
            other => Err(format!("expected `narrower` or `broader`, got {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Closure {
    pub members: BTreeSet<EntityRef>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Adjacency lists in both directions, built once per catalog.
#[derive(Debug, Clone)]
pub struct MeronymyGraph {
    parents: Vec<Vec<EntityRef>>,
    children: Vec<Vec<EntityRef>>,
    dangling: Vec<(EntityRef, String)>,
}

impl MeronymyGraph {
    pub fn new(catalog: &Catalog) -> Self {
        let mut parents = vec![Vec::new(); catalog.len()];
        let mut children = vec![Vec::new(); catalog.len()];
        let mut dangling = Vec::new();
        for (at, entity) in catalog.iter() {
            for parent_id in &entity.part_of {
                match catalog.lookup(parent_id) {
                    Some(parent) => {
                        parents[at.0].push(parent);
                        children[parent.0].push(at);
                    }
                    None => dangling.push((at, parent_id.to_string())),
                }
            }
        }
        Self {
            parents,
            children,
            dangling,
        }
    }

    pub fn neighbours(&self, at: EntityRef, direction: Direction) -> &[EntityRef] {
        match direction {
            Direction::Broader => &self.parents[at.0],
            Direction::Narrower => &self.children[at.0],
        }
    }

    /// Transitive closure from `start`, excluding `start` itself. Cycles
    /// are cut and reported; edges to unknown entities are reported.
    pub fn closure(&self, catalog: &Catalog, start: EntityRef, direction: Direction) -> Closure {
        let mut out = Closure::default();
        let mut seen = BTreeSet::new();
        seen.insert(start);
        let mut queue = VecDeque::from([start]);
        while let Some(node) = queue.pop_front() {
            if direction == Direction::Broader {
                for (from, target) in self.dangling.iter().filter(|(from, _)| *from == node) {
                    out.diagnostics.push(Diagnostic::warning(
                        "meronymy.dangling",
                        format!("{} is part of unknown entity {target}", catalog.get(*from).id),
                    ));
                }
            }
            for &next in self.neighbours(node, direction) {
                if next == start {
                    out.diagnostics.push(Diagnostic::warning(
                        "meronymy.cycle",
                        format!(
                            "part-of cycle through {} (edge from {})",
                            catalog.get(start).id,
                            catalog.get(node).id
                        ),
                    ));
                    continue;
                }
                if seen.insert(next) {
                    out.members.insert(next);
                    queue.push_back(next);
                }
            }
        }
        out
    }
}

/// One-shot closure; build a [`MeronymyGraph`] when querying repeatedly.
pub fn meronym_closure(catalog: &Catalog, entity: EntityRef, direction: Direction) -> Closure {
    MeronymyGraph::new(catalog).closure(catalog, entity, direction)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Entity, EntityId};

    fn id(s: &str) -> EntityId {
        s.parse().unwrap()
    }

    fn voyager() -> Catalog {
        Catalog::from_entities([
            Entity::new(id("pds:voyager"), "Voyager"),
            Entity::new(id("pds:voyager-1"), "Voyager 1").with_part_of(id("pds:voyager")),
            Entity::new(id("pds:voyager-2"), "Voyager 2").with_part_of(id("pds:voyager")),
            Entity::new(id("pds:voyager-1-mag"), "Voyager 1 MAG").with_part_of(id("pds:voyager-1")),
            Entity::new(id("pds:cassini"), "Cassini"),
        ])
        .unwrap()
    }

    #[test]
    fn mission_expands_to_spacecraft() {
        let c = voyager();
        let closure = meronym_closure(&c, EntityRef(0), Direction::Narrower);
        let labels: Vec<&str> = closure.members.iter().map(|m| c.get(*m).pref_label.as_str()).collect();
        assert_eq!(labels, ["Voyager 1", "Voyager 2", "Voyager 1 MAG"]);
        assert!(closure.diagnostics.is_empty());
    }

    #[test]
    fn isolated_entity_has_empty_closure() {
        let c = voyager();
        assert!(meronym_closure(&c, EntityRef(4), Direction::Narrower).members.is_empty());
        assert!(meronym_closure(&c, EntityRef(4), Direction::Broader).members.is_empty());
    }

    #[test]
    fn chain_closure_matches_reachability() {
        // a part-of b part-of c
        let c = Catalog::from_entities([
            Entity::new(id("x:a"), "a").with_part_of(id("x:b")),
            Entity::new(id("x:b"), "b").with_part_of(id("x:c")),
            Entity::new(id("x:c"), "c"),
        ])
        .unwrap();
        let narrower = meronym_closure(&c, EntityRef(2), Direction::Narrower).members;
        assert_eq!(narrower, BTreeSet::from([EntityRef(0), EntityRef(1)]));
        let broader = meronym_closure(&c, EntityRef(0), Direction::Broader).members;
        assert_eq!(broader, BTreeSet::from([EntityRef(1), EntityRef(2)]));
    }

    #[test]
    fn cycles_are_cut_and_reported() {
        let c = Catalog::from_entities([
            Entity::new(id("x:a"), "a").with_part_of(id("x:b")),
            Entity::new(id("x:b"), "b").with_part_of(id("x:a")),
        ])
        .unwrap();
        let closure = meronym_closure(&c, EntityRef(0), Direction::Broader);
        assert_eq!(closure.members, BTreeSet::from([EntityRef(1)]));
        assert_eq!(closure.diagnostics.len(), 1);
        assert_eq!(closure.diagnostics[0].code, "meronymy.cycle");
    }

    #[test]
    fn dangling_parent_reported() {
        let c = Catalog::from_entities([Entity::new(id("aas:t"), "T").with_part_of(id("aas:nowhere"))]).unwrap();
        let closure = meronym_closure(&c, EntityRef(0), Direction::Broader);
        assert!(closure.members.is_empty());
        assert_eq!(closure.diagnostics[0].code, "meronymy.dangling");
    }
}
