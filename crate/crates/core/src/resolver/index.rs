//! In-process name index: exact alias lookup plus trigram-filtered fuzzy
//! ranking.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::diagnostics::Diagnostic;
use crate::emit::{FacilityRow, ResolverDictionary};
use crate::model::Direction;
use crate::scoring::levenshtein::levenshtein_similarity;
use crate::scoring::text::normalize_label;

/// Minimum trigram Jaccard overlap for a fuzzy candidate.
pub const TRIGRAM_FLOOR: f64 = 0.2;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolveHit {
    pub slug: String,
    pub label: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AliasEntry {
    pub slug: String,
    pub preferred: String,
    pub aliases: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AliasesResponse {
    pub slug: String,
    pub preferred: String,
    pub aliases: Vec<String>,
    /// Transitive meronymy neighbours in the requested direction.
    pub expanded: Vec<AliasEntry>,
}

/// Lookup backend behind the resolver endpoints.
pub trait NameIndex: Send + Sync {
    fn resolve(&self, query: &str, limit: usize) -> Vec<ResolveHit>;
    /// `None` for unknown slugs.
    fn aliases(&self, slug: &str, expand: Option<Direction>) -> Option<AliasesResponse>;
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone)]
struct Entry {
    slug: String,
    /// Preferred label first.
    aliases: Vec<String>,
    normalized: Vec<String>,
    parents: Vec<usize>,
    children: Vec<usize>,
}

#[derive(Debug, Clone, Default)]
pub struct ResolverIndex {
    entries: Vec<Entry>,
    by_slug: HashMap<String, usize>,
    exact: HashMap<String, BTreeSet<usize>>,
    /// Trigram → (entry, alias position) postings.
    trigrams: HashMap<[char; 3], Vec<u32>>,
    /// Flattened (entry, trigram count) per indexed alias.
    alias_meta: Vec<(usize, usize)>,
}

pub fn trigrams(normalized: &str) -> BTreeSet<[char; 3]> {
    let padded: Vec<char> = std::iter::once(' ')
        .chain(normalized.chars())
        .chain(std::iter::once(' '))
        .collect();
    padded.windows(3).map(|w| [w[0], w[1], w[2]]).collect()
}

impl ResolverIndex {
    /// Entries come from the dictionary; meronymy links from `rows` when
    /// given. Rows naming unknown slugs are reported and skipped.
    pub fn build(dictionary: &ResolverDictionary, rows: Option<&[FacilityRow]>) -> (Self, Vec<Diagnostic>) {
        let mut diagnostics = Vec::new();
        let mut index = Self::default();
        for (slug, aliases) in &dictionary.entries {
            let id = index.entries.len();
            let normalized: Vec<String> = aliases.iter().map(|a| normalize_label(a)).collect();
            for n in &normalized {
                if n.is_empty() {
                    continue;
                }
                index.exact.entry(n.clone()).or_default().insert(id);
                let grams = trigrams(n);
                let alias_id = index.alias_meta.len() as u32;
                index.alias_meta.push((id, grams.len()));
                for g in grams {
                    index.trigrams.entry(g).or_default().push(alias_id);
                }
            }
            index.by_slug.insert(slug.clone(), id);
            index.entries.push(Entry {
                slug: slug.clone(),
                aliases: aliases.clone(),
                normalized,
                parents: Vec::new(),
                children: Vec::new(),
            });
        }
        for row in rows.unwrap_or_default() {
            let Some(&child) = index.by_slug.get(&row.slug) else {
                diagnostics.push(Diagnostic::warning("resolver.unknown_row", format!("meronymy row for unknown slug {}", row.slug)));
                continue;
            };
            for p in &row.parents {
                match index.by_slug.get(p) {
                    Some(&parent) => {
                        index.entries[child].parents.push(parent);
                        index.entries[parent].children.push(child);
                    }
                    None => diagnostics.push(Diagnostic::warning(
                        "resolver.unknown_parent",
                        format!("{} names unknown parent {p}", row.slug),
                    )),
                }
            }
        }
        for e in &mut index.entries {
            e.parents.sort_unstable();
            e.parents.dedup();
            e.children.sort_unstable();
            e.children.dedup();
        }
        (index, diagnostics)
    }

    fn hit(&self, id: usize, score: f64) -> ResolveHit {
        let e = &self.entries[id];
        ResolveHit {
            slug: e.slug.clone(),
            label: e.aliases.first().cloned().unwrap_or_default(),
            score,
        }
    }

    fn entry_view(&self, id: usize) -> AliasEntry {
        let e = &self.entries[id];
        AliasEntry {
            slug: e.slug.clone(),
            preferred: e.aliases.first().cloned().unwrap_or_default(),
            aliases: e.aliases.clone(),
        }
    }

    /// Entries sharing at least [`TRIGRAM_FLOOR`] Jaccard overlap with
    /// `query` on some alias.
    fn fuzzy_candidates(&self, query: &str) -> BTreeSet<usize> {
        let grams = trigrams(query);
        let mut shared: HashMap<u32, usize> = HashMap::new();
        for g in &grams {
            if let Some(postings) = self.trigrams.get(g) {
                for &alias in postings {
                    *shared.entry(alias).or_default() += 1;
                }
            }
        }
        shared
            .into_iter()
            .filter(|&(alias, n)| {
                let (_, size) = self.alias_meta[alias as usize];
                n as f64 / (grams.len() + size - n) as f64 >= TRIGRAM_FLOOR
            })
            .map(|(alias, _)| self.alias_meta[alias as usize].0)
            .collect()
    }
}

impl NameIndex for ResolverIndex {
    fn resolve(&self, query: &str, limit: usize) -> Vec<ResolveHit> {
        let q = normalize_label(query);
        if q.is_empty() || limit == 0 {
            return Vec::new();
        }
        let exact = self.exact.get(&q).cloned().unwrap_or_default();
        let mut hits: Vec<ResolveHit> = exact.iter().map(|&id| self.hit(id, 1.0)).collect();
        hits.sort_by(|a, b| a.slug.cmp(&b.slug));
        if hits.len() < limit {
            let mut fuzzy: Vec<ResolveHit> = self
                .fuzzy_candidates(&q)
                .into_iter()
                .filter(|id| !exact.contains(id))
                .map(|id| {
                    let best = self.entries[id]
                        .normalized
                        .iter()
                        .map(|a| levenshtein_similarity(&q, a))
                        .fold(0.0, f64::max);
                    self.hit(id, best)
                })
                .collect();
            fuzzy.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.slug.cmp(&b.slug)));
            hits.extend(fuzzy);
        }
        hits.truncate(limit);
        hits
    }

    fn aliases(&self, slug: &str, expand: Option<Direction>) -> Option<AliasesResponse> {
        let &start = self.by_slug.get(slug)?;
        let mut expanded = Vec::new();
        if let Some(direction) = expand {
            let mut seen = BTreeSet::from([start]);
            let mut queue = VecDeque::from([start]);
            while let Some(node) = queue.pop_front() {
                let next = match direction {
                    Direction::Broader => &self.entries[node].parents,
                    Direction::Narrower => &self.entries[node].children,
                };
                for &n in next {
                    if seen.insert(n) {
                        expanded.push(self.entry_view(n));
                        queue.push_back(n);
                    }
                }
            }
        }
        let view = self.entry_view(start);
        Some(AliasesResponse {
            slug: view.slug,
            preferred: view.preferred,
            aliases: view.aliases,
            expanded,
        })
    }

    fn len(&self) -> usize {
        self.entries.len()
    }
}
