//! Bag-of-words TF-IDF over entity documents.

use std::collections::{BTreeMap, HashMap};

use crate::scoring::cosine::sparse_cosine;
use crate::scoring::text::content_tokens;

/// Vocabulary and document frequencies of one corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct TfidfModel {
    vocabulary: HashMap<String, usize>,
    df: Vec<usize>,
    n_docs: usize,
}

/// Sparse vector sorted by vocabulary index.
pub type SparseVector = Vec<(usize, f64)>;

impl TfidfModel {
    /// One document per entry; tokens are stop-word-free [`content_tokens`].
    pub fn fit<'a>(documents: impl IntoIterator<Item = &'a str>) -> Self {
        let mut vocabulary = HashMap::new();
        let mut df: Vec<usize> = Vec::new();
        let mut n_docs = 0;
        for doc in documents {
            n_docs += 1;
            let mut seen = std::collections::HashSet::new();
            for token in content_tokens(doc) {
                if !seen.insert(token.clone()) {
                    continue;
                }
                let next = vocabulary.len();
                let index = *vocabulary.entry(token).or_insert(next);
                if index == df.len() {
                    df.push(0);
                }
                df[index] += 1;
            }
        }
        Self { vocabulary, df, n_docs }
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn vocabulary_size(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.vocabulary.contains_key(token)
    }

    pub fn df(&self, token: &str) -> Option<usize> {
        self.vocabulary.get(token).map(|&i| self.df[i])
    }

    /// `ln(N / df)`; `None` for out-of-vocabulary tokens.
    pub fn idf(&self, token: &str) -> Option<f64> {
        self.df(token).map(|df| (self.n_docs as f64 / df as f64).ln())
    }

    /// Raw term count times idf; out-of-vocabulary tokens are dropped.
    pub fn vectorize(&self, document: &str) -> SparseVector {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for token in content_tokens(document) {
            if let Some(&i) = self.vocabulary.get(&token) {
                *counts.entry(i).or_default() += 1;
            }
        }
        counts
            .into_iter()
            .map(|(i, tf)| (i, tf as f64 * (self.n_docs as f64 / self.df[i] as f64).ln()))
            .filter(|(_, w)| *w != 0.0)
            .collect()
    }

    /// Cosine of two documents, clipped to [0, 1]; `None` when either has
    /// no weighted tokens.
    pub fn similarity(&self, a: &str, b: &str) -> Option<f64> {
        let (u, v) = (self.vectorize(a), self.vectorize(b));
        if u.is_empty() || v.is_empty() {
            return None;
        }
        Some(sparse_cosine(&u, &v).clamp(0.0, 1.0))
    }
}

/// Cosine of two precomputed vectors; 0 when either is empty.
pub fn tfidf_cosine(u: &SparseVector, v: &SparseVector) -> f64 {
    sparse_cosine(u, v).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_document_corpus() {
        let m = TfidfModel::fit(["voyager spacecraft", "voyager probe", "la silla observatory"]);
        assert_eq!(m.n_docs(), 3);
        assert!((m.idf("voyager").unwrap() - (1.5f64).ln()).abs() < 1e-12);
        assert!((m.idf("probe").unwrap() - 3f64.ln()).abs() < 1e-12);
        assert_eq!(m.idf("la"), None);
    }

    #[test]
    fn ubiquitous_token_has_zero_idf() {
        let m = TfidfModel::fit(["telescope a", "telescope b"]);
        assert_eq!(m.idf("telescope"), Some(0.0));
        assert!(!m.contains("the"));
    }

    #[test]
    fn similarity_bounds() {
        let m = TfidfModel::fit(["voyager spacecraft", "voyager probe", "la silla observatory", "cassini"]);
        assert!((m.similarity("voyager probe", "voyager probe").unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(m.similarity("voyager probe", "silla observatory"), Some(0.0));
        assert_eq!(m.similarity("the of", "cassini"), None);
    }
}
