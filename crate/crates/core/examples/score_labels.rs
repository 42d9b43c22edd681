//! Lexical scores and the weighted global score for two labels.
//!
//!     cargo run --example score_labels -- "1.52-m spectrographic reflector" "ESO 1.52m telescope at La Silla"

use std::collections::BTreeMap;

use facmatch::scoring::{
    acronym_probability, digits_ratio, extract_numbers, global_score, levenshtein_similarity, ScoreKind, ScoreWeights,
    TfidfModel,
};

fn main() {
    let mut args = std::env::args().skip(1);
    let a = args.next().unwrap_or_else(|| "Observatory".into());
    let b = args.next().unwrap_or_else(|| "Observatoire".into());

    // tf-idf needs a corpus; the two labels plus a few unrelated ones
    let corpus = [a.as_str(), b.as_str(), "Voyager 2", "Mauna Kea Observatories", "Hubble Space Telescope"];
    let tfidf = TfidfModel::fit(corpus);

    let mut scores = BTreeMap::new();
    scores.insert(ScoreKind::Levenshtein, levenshtein_similarity(&a, &b));
    if let Some(s) = tfidf.similarity(&a, &b) {
        scores.insert(ScoreKind::Tfidf, s);
    }
    if let Some(s) = digits_ratio(&extract_numbers(&a), &extract_numbers(&b)) {
        scores.insert(ScoreKind::Digits, s);
    }
    scores.insert(ScoreKind::Acronym, acronym_probability(&a, &b));

    println!("{a:?} vs {b:?}");
    for (kind, value) in &scores {
        println!("  {:<24} {value:.4}", kind.record_field());
    }
    let weights = ScoreWeights::default();
    match global_score(&scores, &weights) {
        Some(g) => println!("  {:<24} {g:.4}", "weighted_sum"),
        None => println!("  no applicable score"),
    }
}
