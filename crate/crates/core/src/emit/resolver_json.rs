//! The name-resolver dictionary: canonical slug → aliases, preferred label
//! first.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::PublishedSets;
use crate::diagnostics::Diagnostic;
use crate::model::Catalog;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ResolverDictionary {
    pub entries: BTreeMap<String, Vec<String>>,
}

impl ResolverDictionary {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("string maps serialize");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

/// Every label, notation and external identifier of each set. An alias
/// claimed by several sets stays with the set it names, otherwise with the
/// first set in order.
pub fn emit_resolver_json(catalog: &Catalog, published: &PublishedSets) -> (ResolverDictionary, Vec<Diagnostic>) {
    let mut diagnostics = Vec::new();
    let pools: Vec<BTreeSet<String>> = published
        .sets
        .iter()
        .map(|set| {
            set.members
                .iter()
                .flat_map(|m| {
                    let e = catalog.get(*m);
                    e.labels()
                        .map(str::to_owned)
                        .chain(e.external_ids.values().cloned())
                        .collect::<Vec<_>>()
                })
                .filter(|a| !a.trim().is_empty())
                .collect()
        })
        .collect();

    let mut pref_owner: HashMap<&str, usize> = HashMap::new();
    for (i, set) in published.sets.iter().enumerate() {
        if let Some(first) = pref_owner.insert(set.pref_label.as_str(), i) {
            pref_owner.insert(set.pref_label.as_str(), first);
            diagnostics.push(Diagnostic::warning(
                "resolver.shared_pref_label",
                format!(
                    "{} and {} share the preferred label {:?}",
                    published.slugs[first], published.slugs[i], set.pref_label
                ),
            ));
        }
    }
    let mut owner: HashMap<&str, usize> = HashMap::new();
    for (i, pool) in pools.iter().enumerate() {
        for alias in pool {
            let claim = pref_owner.get(alias.as_str()).copied().unwrap_or(i);
            owner.entry(alias.as_str()).or_insert(claim);
        }
    }

    let mut entries = BTreeMap::new();
    for (i, set) in published.sets.iter().enumerate() {
        let mut aliases = vec![set.pref_label.clone()];
        aliases.extend(
            pools[i]
                .iter()
                .filter(|a| **a != set.pref_label && owner[a.as_str()] == i)
                .cloned(),
        );
        entries.insert(published.slugs[i].clone(), aliases);
    }
    (ResolverDictionary { entries }, diagnostics)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Entity, EntityRef, IdScheme, SetRegistry, SourcePriority};

    #[test]
    fn cosmos_aliases() {
        let c = Catalog::from_entities([
            Entity::new("pds:cosmos-1221".parse().unwrap(), "COSMOS 1221").with_alt_label("1980-090A"),
            Entity::new("wikidata:q1".parse().unwrap(), "Cosmos 1221")
                .with_notation("12058")
                .with_external_id(IdScheme::Cospar, "1980-090A"),
        ])
        .unwrap();
        let mut r = SetRegistry::new(&c);
        r.merge(EntityRef(0), EntityRef(1));
        let priority = SourcePriority::new(vec!["pds".parse().unwrap(), "wikidata".parse().unwrap()]).unwrap();
        let (dict, diags) = emit_resolver_json(&c, &PublishedSets::new(&c, &r, &priority));
        assert!(diags.is_empty());
        assert_eq!(dict.entries["cosmos-1221"], ["COSMOS 1221", "12058", "1980-090A", "Cosmos 1221"]);
    }

    #[test]
    fn shared_alias_goes_to_one_key() {
        let c = Catalog::from_entities([
            Entity::new("pds:a".parse().unwrap(), "Alpha").with_alt_label("Shared"),
            Entity::new("pds:b".parse().unwrap(), "Beta").with_alt_label("Shared").with_alt_label("Alpha"),
        ])
        .unwrap();
        let r = SetRegistry::new(&c);
        let (dict, _) = emit_resolver_json(&c, &PublishedSets::new(&c, &r, &SourcePriority::default()));
        assert_eq!(dict.entries["alpha"], ["Alpha", "Shared"]);
        assert_eq!(dict.entries["beta"], ["Beta"]);
        let back = ResolverDictionary::from_json(&dict.to_json()).unwrap();
        assert_eq!(back, dict);
    }
}
