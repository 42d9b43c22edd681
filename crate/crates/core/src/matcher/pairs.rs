//! Candidate pairs and their generation.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::criteria::{evaluate_criterion, Criterion, Decision, Side};
use crate::model::{Catalog, EntityRef, SetRegistry};
use crate::profile::EntityProfile;
use crate::scoring::ScoreKind;
use crate::strategy::TypeFilter;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairStatus {
    Pending,
    AutoAccepted,
    Filtered,
    Validated,
    Rejected,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidatePair {
    pub left: EntityRef,
    pub right: EntityRef,
    pub decisions: BTreeMap<Criterion, Decision>,
    /// Applicable scores only.
    pub scores: BTreeMap<ScoreKind, f64>,
    pub global_score: Option<f64>,
    pub status: PairStatus,
}

impl CandidatePair {
    pub fn new(left: EntityRef, right: EntityRef) -> Self {
        Self {
            left,
            right,
            decisions: BTreeMap::new(),
            scores: BTreeMap::new(),
            global_score: None,
            status: PairStatus::Pending,
        }
    }

    pub fn label_matched(&self) -> bool {
        self.decisions.get(&Criterion::LabelMatch) == Some(&Decision::Accept)
    }

    /// Evaluates `criteria` in order, stopping at the first decisive one.
    /// The pair ends AutoAccepted, Filtered or still Pending.
    pub fn apply_criteria(&mut self, criteria: &[Criterion], left: Side<'_>, right: Side<'_>) {
        for &criterion in criteria {
            let decision = evaluate_criterion(criterion, left, right);
            self.decisions.insert(criterion, decision);
            match decision {
                Decision::Accept => {
                    self.status = PairStatus::AutoAccepted;
                    return;
                }
                Decision::Reject => {
                    self.status = PairStatus::Filtered;
                    return;
                }
                Decision::Neutral => {}
            }
        }
    }

    /// The invariants tying status to decisions and score.
    pub fn is_consistent(&self) -> bool {
        let has = |d| self.decisions.values().any(|x| *x == d);
        match self.status {
            PairStatus::AutoAccepted => has(Decision::Accept),
            PairStatus::Filtered => has(Decision::Reject) && self.global_score.is_none(),
            _ => true,
        }
    }
}

/// Non-deprecated entities of `list` that pass `filter`.
pub fn filter_list(catalog: &Catalog, list: &[EntityRef], filter: Option<&TypeFilter>) -> Vec<EntityRef> {
    list.iter()
        .copied()
        .filter(|&at| {
            let e = catalog.get(at);
            !e.deprecated && filter.is_none_or(|f| f.admits(e.class))
        })
        .collect()
}

/// Cross product of the filtered lists in (left id, right id) order.
///
/// A left entity whose synonym set already holds an entity of the right
/// list's source is excluded; an entity never pairs with itself.
pub fn generate_pairs(
    catalog: &Catalog,
    registry: &SetRegistry,
    left: &[EntityRef],
    right: &[EntityRef],
    filter: Option<&TypeFilter>,
) -> Vec<CandidatePair> {
    let mut lefts = filter_list(catalog, left, filter);
    let mut rights = filter_list(catalog, right, filter);
    let right_sources: BTreeSet<_> = rights.iter().map(|r| catalog.get(*r).source().clone()).collect();
    let mut holders: BTreeMap<EntityRef, Vec<EntityRef>> = BTreeMap::new();
    for (at, e) in catalog.iter() {
        if right_sources.contains(e.source()) {
            holders.entry(registry.find(at)).or_default().push(at);
        }
    }
    lefts.retain(|&l| {
        holders
            .get(&registry.find(l))
            .is_none_or(|hs| hs.iter().all(|&h| h == l))
    });
    lefts.sort_by(|a, b| catalog.get(*a).id.cmp(&catalog.get(*b).id));
    rights.sort_by(|a, b| catalog.get(*a).id.cmp(&catalog.get(*b).id));
    let mut out = Vec::with_capacity(lefts.len() * rights.len());
    for &l in &lefts {
        for &r in &rights {
            if l != r {
                out.push(CandidatePair::new(l, r));
            }
        }
    }
    out
}

/// Sides of `pair` for criterion evaluation.
pub fn sides<'a>(
    catalog: &'a Catalog,
    profiles: &'a [EntityProfile],
    pair: &CandidatePair,
) -> (Side<'a>, Side<'a>) {
    (
        Side {
            entity: catalog.get(pair.left),
            profile: &profiles[pair.left.0],
        },
        Side {
            entity: catalog.get(pair.right),
            profile: &profiles[pair.right.0],
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Entity, FacilityClass, SourceId};

    fn fixture() -> Catalog {
        let mut entities = vec![];
        for (slug, class) in [
            ("a1", FacilityClass::Spacecraft),
            ("a2", FacilityClass::Spacecraft),
            ("a3", FacilityClass::Telescope),
            ("a4", FacilityClass::Unknown),
        ] {
            entities.push(Entity::new(format!("iaumpc:{slug}").parse().unwrap(), slug).with_class(class));
        }
        for i in 1..=4 {
            entities.push(Entity::new(format!("wikidata:b{i}").parse().unwrap(), format!("b{i}")));
        }
        Catalog::from_entities(entities).unwrap()
    }

    fn refs(c: &Catalog, source: &str) -> Vec<EntityRef> {
        c.by_source(&SourceId::new(source).unwrap())
    }

    #[test]
    fn cross_product() {
        let c = fixture();
        let r = SetRegistry::new(&c);
        let left = &refs(&c, "iaumpc")[..3];
        assert_eq!(generate_pairs(&c, &r, left, &refs(&c, "wikidata"), None).len(), 12);
    }

    #[test]
    fn merged_left_entity_is_excluded() {
        let c = fixture();
        let mut r = SetRegistry::new(&c);
        let left = refs(&c, "iaumpc")[..3].to_vec();
        let right = refs(&c, "wikidata");
        r.merge(left[0], right[0]);
        assert_eq!(generate_pairs(&c, &r, &left, &right, None).len(), 8);
    }

    #[test]
    fn type_filter_keeps_unknown() {
        let c = fixture();
        let r = SetRegistry::new(&c);
        let filter: TypeFilter = "spacecraft".parse().unwrap();
        let kept = filter_list(&c, &refs(&c, "iaumpc"), Some(&filter));
        assert_eq!(kept.len(), 3);
        let pairs = generate_pairs(&c, &r, &refs(&c, "iaumpc"), &refs(&c, "wikidata"), Some(&filter));
        assert_eq!(pairs.len(), 12);
    }

    #[test]
    fn order_and_no_self_pairs() {
        let c = fixture();
        let r = SetRegistry::new(&c);
        let all: Vec<EntityRef> = (0..c.len()).map(EntityRef).collect();
        let pairs = generate_pairs(&c, &r, &all, &all, None);
        assert_eq!(pairs.len(), 8 * 7);
        assert!(pairs.windows(2).all(|w| {
            let k = |p: &CandidatePair| (c.get(p.left).id.clone(), c.get(p.right).id.clone());
            k(&w[0]) < k(&w[1])
        }));
    }

    #[test]
    fn criteria_short_circuit() {
        let c = Catalog::from_entities([
            Entity::new("pds:t".parse().unwrap(), "Teide").with_class(FacilityClass::Telescope),
            Entity::new("aas:t".parse().unwrap(), "Teide").with_class(FacilityClass::Observatory),
        ])
        .unwrap();
        let profiles: Vec<EntityProfile> = c.entities().iter().map(EntityProfile::of).collect();
        let mut p = CandidatePair::new(EntityRef(0), EntityRef(1));
        let (l, r) = sides(&c, &profiles, &p);
        p.apply_criteria(&[Criterion::Type, Criterion::LabelMatch], l, r);
        assert_eq!(p.status, PairStatus::Filtered);
        assert_eq!(p.decisions.len(), 1);
        let mut q = CandidatePair::new(EntityRef(0), EntityRef(1));
        q.apply_criteria(&[Criterion::LabelMatch, Criterion::Type], l, r);
        assert_eq!(q.status, PairStatus::AutoAccepted);
        assert!(p.is_consistent() && q.is_consistent());
    }
}
