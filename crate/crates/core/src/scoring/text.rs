//! Tokenization, label normalization and the shipped stop-word lists.

use std::collections::HashSet;
use std::sync::LazyLock;

static STOPWORDS: LazyLock<HashSet<&'static str>> = LazyLock::new(|| {
    [
        include_str!("../../data/stopwords/english.txt"),
        include_str!("../../data/stopwords/spanish.txt"),
        include_str!("../../data/stopwords/french.txt"),
    ]
    .iter()
    .flat_map(|list| list.lines())
    .map(str::trim)
    .filter(|w| !w.is_empty())
    .collect()
});

/// English, Spanish and French stop words, lowercase.
pub fn is_stopword(token: &str) -> bool {
    STOPWORDS.contains(token)
}

pub fn stopword_count() -> usize {
    STOPWORDS.len()
}

/// Case-folds, trims and collapses internal whitespace.
pub fn normalize_label(label: &str) -> String {
    label
        .split_whitespace()
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Maximal runs of Unicode letters and digits, lowercased.
pub fn tokens(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
}

/// [`tokens`] minus stop words.
pub fn content_tokens(text: &str) -> impl Iterator<Item = String> + '_ {
    tokens(text).filter(|t| !is_stopword(t))
}
