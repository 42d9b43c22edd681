//! Synonym sets: union-find over catalog entities plus preferred-label
//! election.

use std::collections::{BTreeMap, BTreeSet};

use super::{Catalog, Entity, EntityRef, ModelError, SourceId};

/// Sources ordered from most to least trusted for the preferred label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourcePriority {
    order: Vec<SourceId>,
}

impl SourcePriority {
    pub fn new(order: Vec<SourceId>) -> Result<Self, ModelError> {
        let mut seen = BTreeSet::new();
        for source in &order {
            if !seen.insert(source) {
                return Err(ModelError::DuplicatePriority(source.clone()));
            }
        }
        Ok(Self { order })
    }

    pub fn order(&self) -> &[SourceId] {
        &self.order
    }

    /// Lower is better; unlisted sources rank after every listed one.
    pub fn rank(&self, source: &SourceId) -> usize {
        self.order
            .iter()
            .position(|s| s == source)
            .unwrap_or(self.order.len())
    }

    /// Sources from `sources` that the order does not mention.
    pub fn missing<'a>(&self, sources: impl IntoIterator<Item = &'a SourceId>) -> Vec<SourceId> {
        sources
            .into_iter()
            .filter(|s| !self.order.contains(s))
            .cloned()
            .collect()
    }
}

impl Default for SourcePriority {
    fn default() -> Self {
        Self {
            order: SourceId::defaults(),
        }
    }
}

/// Picks the preferred label of a set of entities: highest-priority source
/// wins, ties within one source go to the shortest label, then the
/// lexicographically smallest one.
pub fn elect_pref_label<'a>(
    members: impl IntoIterator<Item = &'a Entity>,
    priority: &SourcePriority,
) -> Option<(String, SourceId)> {
    members
        .into_iter()
        .min_by(|a, b| {
            priority
                .rank(a.source())
                .cmp(&priority.rank(b.source()))
                .then_with(|| a.pref_label.chars().count().cmp(&b.pref_label.chars().count()))
                .then_with(|| a.pref_label.cmp(&b.pref_label))
                .then_with(|| a.id.cmp(&b.id))
        })
        .map(|winner| (winner.pref_label.clone(), winner.source().clone()))
}

/// One equivalence class with its elected label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynonymSet {
    /// Members in id order.
    pub members: Vec<EntityRef>,
    /// Union-find root: the member with the smallest id.
    pub representative: EntityRef,
    pub pref_label: String,
    pub pref_source: SourceId,
}

/// Disjoint-set registry over the entities of one [`Catalog`].
///
/// The root of every set is its smallest entity id, so the structure of
/// the forest never depends on merge order.
#[derive(Debug, Clone)]
pub struct SetRegistry {
    parent: Vec<usize>,
    /// Rank of each entity in id order; roots minimize this key.
    order_key: Vec<usize>,
}

impl SetRegistry {
    pub fn new(catalog: &Catalog) -> Self {
        let mut by_id: Vec<usize> = (0..catalog.len()).collect();
        by_id.sort_by(|a, b| catalog.get(EntityRef(*a)).id.cmp(&catalog.get(EntityRef(*b)).id));
        let mut order_key = vec![0; catalog.len()];
        for (rank, index) in by_id.into_iter().enumerate() {
            order_key[index] = rank;
        }
        Self {
            parent: (0..catalog.len()).collect(),
            order_key,
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Root of `at`.
    pub fn find(&self, at: EntityRef) -> EntityRef {
        let mut root = at.0;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        EntityRef(root)
    }

    fn find_compress(&mut self, at: EntityRef) -> EntityRef {
        let root = self.find(at);
        let mut node = at.0;
        while self.parent[node] != root.0 {
            let next = self.parent[node];
            self.parent[node] = root.0;
            node = next;
        }
        root
    }

    pub fn same_set(&self, a: EntityRef, b: EntityRef) -> bool {
        self.find(a) == self.find(b)
    }

    /// Unites the sets of `a` and `b` and returns the new root. Merging an
    /// entity with itself or with a current set-mate changes nothing.
    pub fn merge(&mut self, a: EntityRef, b: EntityRef) -> EntityRef {
        let ra = self.find_compress(a);
        let rb = self.find_compress(b);
        if ra == rb {
            return ra;
        }
        let (root, child) = if self.order_key[ra.0] <= self.order_key[rb.0] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[child.0] = root.0;
        root
    }

    /// Members of the set containing `at`, in id order.
    pub fn members(&self, at: EntityRef) -> Vec<EntityRef> {
        let root = self.find(at);
        let mut members: Vec<EntityRef> = (0..self.len())
            .map(EntityRef)
            .filter(|m| self.find(*m) == root)
            .collect();
        members.sort_by_key(|m| self.order_key[m.0]);
        members
    }

    /// Every set, keyed by root, members in id order.
    pub fn groups(&self) -> BTreeMap<EntityRef, Vec<EntityRef>> {
        let mut groups: BTreeMap<EntityRef, Vec<EntityRef>> = BTreeMap::new();
        for index in 0..self.len() {
            let at = EntityRef(index);
            groups.entry(self.find(at)).or_default().push(at);
        }
        for members in groups.values_mut() {
            members.sort_by_key(|m| self.order_key[m.0]);
        }
        groups
    }

    /// Labels and notations of every member of the set of `at`.
    pub fn alias_pool(&self, catalog: &Catalog, at: EntityRef) -> BTreeSet<String> {
        self.members(at)
            .into_iter()
            .flat_map(|m| catalog.get(m).labels().map(str::to_owned).collect::<Vec<_>>())
            .collect()
    }

    /// Alias pools for all entities at once (one pass over the forest).
    pub fn alias_pools(&self, catalog: &Catalog) -> Vec<BTreeSet<String>> {
        let groups = self.groups();
        let mut pool_of_root: BTreeMap<EntityRef, BTreeSet<String>> = BTreeMap::new();
        for (root, members) in &groups {
            let pool = members
                .iter()
                .flat_map(|m| catalog.get(*m).labels().map(str::to_owned).collect::<Vec<_>>())
                .collect();
            pool_of_root.insert(*root, pool);
        }
        (0..self.len())
            .map(|i| pool_of_root[&self.find(EntityRef(i))].clone())
            .collect()
    }

    /// Materializes all sets with their elected labels, ordered by
    /// representative id.
    pub fn synonym_sets(&self, catalog: &Catalog, priority: &SourcePriority) -> Vec<SynonymSet> {
        let mut sets: Vec<SynonymSet> = self
            .groups()
            .into_values()
            .map(|members| {
                let representative = members[0];
                let (pref_label, pref_source) =
                    elect_pref_label(members.iter().map(|m| catalog.get(*m)), priority)
                        .expect("groups are never empty");
                SynonymSet {
                    members,
                    representative,
                    pref_label,
                    pref_source,
                }
            })
            .collect();
        sets.sort_by_key(|s| self.order_key[s.representative.0]);
        sets
    }

    pub fn synonym_set(&self, catalog: &Catalog, priority: &SourcePriority, at: EntityRef) -> SynonymSet {
        let members = self.members(at);
        let (pref_label, pref_source) =
            elect_pref_label(members.iter().map(|m| catalog.get(*m)), priority)
                .expect("a set contains at least its own entity");
        SynonymSet {
            representative: members[0],
            members,
            pref_label,
            pref_source,
        }
    }
}
