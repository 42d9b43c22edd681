//! Alignment through shared external identifiers.

use std::collections::{BTreeMap, BTreeSet};

use super::criteria::same_identifier;
use crate::diagnostics::Diagnostic;
use crate::model::{Catalog, EntityRef, IdScheme};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdMatch {
    pub left: EntityRef,
    pub right: EntityRef,
    /// Schemes on which both sides agree.
    pub schemes: Vec<IdScheme>,
}

fn key(value: &str) -> String {
    value.trim().to_ascii_uppercase()
}

/// Pairs agreeing on at least one scheme and conflicting on none, in
/// (left, right) catalog order. Identifier values carried by several
/// entities of one list are reported and ignored.
pub fn resolve_external_ids(
    catalog: &Catalog,
    left: &[EntityRef],
    right: &[EntityRef],
) -> (Vec<IdMatch>, Vec<Diagnostic>) {
    let mut diagnostics = Vec::new();
    let left_index = index(catalog, left, &mut diagnostics);
    let right_index = index(catalog, right, &mut diagnostics);

    let mut candidates: BTreeSet<(EntityRef, EntityRef)> = BTreeSet::new();
    for (slot, lefts) in &left_index {
        if let (Some(&l), Some(&r)) = (lefts.first(), right_index.get(slot).and_then(|v| v.first())) {
            if lefts.len() == 1 && right_index[slot].len() == 1 && l != r {
                candidates.insert((l, r));
            }
        }
    }

    let mut matches: Vec<IdMatch> = candidates
        .into_iter()
        .filter_map(|(l, r)| {
            let (le, re) = (catalog.get(l), catalog.get(r));
            let mut schemes = Vec::new();
            for scheme in IdScheme::ALL {
                if let (Some(a), Some(b)) = (le.external_ids.get(&scheme), re.external_ids.get(&scheme)) {
                    if !same_identifier(a, b) {
                        return None;
                    }
                    schemes.push(scheme);
                }
            }
            Some(IdMatch { left: l, right: r, schemes })
        })
        .collect();
    matches.sort_by(|a, b| {
        (&catalog.get(a.left).id, &catalog.get(a.right).id).cmp(&(&catalog.get(b.left).id, &catalog.get(b.right).id))
    });
    (matches, diagnostics)
}

/// (scheme, value) → entities, with collisions reported.
fn index(
    catalog: &Catalog,
    list: &[EntityRef],
    diagnostics: &mut Vec<Diagnostic>,
) -> BTreeMap<(IdScheme, String), Vec<EntityRef>> {
    let mut out: BTreeMap<(IdScheme, String), Vec<EntityRef>> = BTreeMap::new();
    for &at in list {
        for (&scheme, value) in &catalog.get(at).external_ids {
            out.entry((scheme, key(value))).or_default().push(at);
        }
    }
    for ((scheme, value), holders) in &out {
        if holders.len() > 1 {
            let ids: Vec<String> = holders.iter().map(|h| catalog.get(*h).id.to_string()).collect();
            diagnostics.push(Diagnostic::warning(
                "external_id.collision",
                format!("{scheme} {value} is carried by {}", ids.join(", ")),
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Entity;

    fn catalog() -> Catalog {
        Catalog::from_entities([
            Entity::new("pds:cosmos-1221".parse().unwrap(), "COSMOS 1221").with_external_id(IdScheme::Cospar, "1980-090A"),
            Entity::new("pds:voyager-1".parse().unwrap(), "Voyager 1").with_external_id(IdScheme::Naif, "-31"),
            Entity::new("pds:bare".parse().unwrap(), "Bare"),
            Entity::new("wikidata:q1".parse().unwrap(), "Cosmos 1221")
                .with_external_id(IdScheme::Cospar, "1980-090a")
                .with_external_id(IdScheme::Nssdca, "1980-090A"),
            Entity::new("wikidata:q2".parse().unwrap(), "Voyager 2").with_external_id(IdScheme::Naif, "-32"),
            Entity::new("wikidata:q3".parse().unwrap(), "Thing").with_external_id(IdScheme::Nssdca, "2000-001A"),
        ])
        .unwrap()
    }

    #[test]
    fn shared_cospar_matches() {
        let c = catalog();
        let (m, d) = resolve_external_ids(&c, &[EntityRef(0), EntityRef(1), EntityRef(2)], &[EntityRef(3), EntityRef(4), EntityRef(5)]);
        assert!(d.is_empty());
        assert_eq!(m, vec![IdMatch { left: EntityRef(0), right: EntityRef(3), schemes: vec![IdScheme::Cospar] }]);
    }

    #[test]
    fn conflict_on_another_scheme_blocks() {
        let c = Catalog::from_entities([
            Entity::new("a:x".parse().unwrap(), "X")
                .with_external_id(IdScheme::Cospar, "1980-090A")
                .with_external_id(IdScheme::Naif, "-1"),
            Entity::new("b:y".parse().unwrap(), "Y")
                .with_external_id(IdScheme::Cospar, "1980-090A")
                .with_external_id(IdScheme::Naif, "-2"),
        ])
        .unwrap();
        assert!(resolve_external_ids(&c, &[EntityRef(0)], &[EntityRef(1)]).0.is_empty());
    }

    #[test]
    fn collisions_are_diagnostics() {
        let c = Catalog::from_entities([
            Entity::new("naif:a".parse().unwrap(), "A").with_external_id(IdScheme::Naif, "-82"),
            Entity::new("naif:b".parse().unwrap(), "B").with_external_id(IdScheme::Naif, "-82"),
            Entity::new("imcce:c".parse().unwrap(), "C").with_external_id(IdScheme::Naif, "-82"),
        ])
        .unwrap();
        let (m, d) = resolve_external_ids(&c, &[EntityRef(2)], &[EntityRef(0), EntityRef(1)]);
        assert!(m.is_empty());
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].code, "external_id.collision");
    }
}
