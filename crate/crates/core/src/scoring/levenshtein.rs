//! Normalized edit-distance similarity.

use crate::profile::EntityProfile;

/// `1 - distance / max(len)` over case-folded characters. Two empty strings
/// score 1, one empty string scores 0.
pub fn levenshtein_similarity(a: &str, b: &str) -> f64 {
    strsim::normalized_levenshtein(&a.to_lowercase(), &b.to_lowercase())
}

/// Best similarity over the cross product of both label pools.
pub fn pair_levenshtein(left: &EntityProfile, right: &EntityProfile) -> f64 {
    best_over(&left.labels, &right.labels)
}

/// Best similarity between any string of `a` and any string of `b`; 0 when
/// either side is empty.
pub fn best_over(a: &[String], b: &[String]) -> f64 {
    let folded_b: Vec<String> = b.iter().map(|s| s.to_lowercase()).collect();
    let mut best = 0.0f64;
    for x in a {
        let x = x.to_lowercase();
        for y in &folded_b {
            best = best.max(strsim::normalized_levenshtein(&x, y));
            if best == 1.0 {
                return best;
            }
        }
    }
    best
}
