//! Acronym probability: how well a short token spells the initials of a
//! longer label.

use crate::profile::EntityProfile;
use crate::scoring::text::content_tokens;

/// Score for one (short, long) orientation, or `None` when `short` is not
/// a single token of 2 to 10 letters or `long` has fewer than two content
/// tokens.
pub fn acronym_score(short: &str, long: &str) -> Option<f64> {
    let short = short.trim();
    let letters: Vec<char> = short.chars().flat_map(char::to_uppercase).collect();
    if !(2..=10).contains(&letters.len()) || !letters.iter().all(|c| c.is_alphabetic()) {
        return None;
    }
    let initials: Vec<char> = content_tokens(long)
        .filter_map(|t| t.chars().next())
        .flat_map(char::to_uppercase)
        .collect();
    if initials.len() < 2 {
        return None;
    }
    Some(lcs_len(&letters, &initials) as f64 / letters.len() as f64)
}

/// Best score over both orientations; 0 when neither qualifies.
pub fn acronym_probability(a: &str, b: &str) -> f64 {
    acronym_score(a, b)
        .into_iter()
        .chain(acronym_score(b, a))
        .fold(0.0, f64::max)
}

/// Best [`acronym_probability`] over both label pools.
pub fn pair_acronym(left: &EntityProfile, right: &EntityProfile) -> f64 {
    let mut best = 0.0f64;
    for a in &left.labels {
        for b in &right.labels {
            best = best.max(acronym_probability(a, b));
            if best == 1.0 {
                return best;
            }
        }
    }
    best
}

fn lcs_len(a: &[char], b: &[char]) -> usize {
    let mut row = vec![0usize; b.len() + 1];
    for &x in a {
        let mut diag = 0;
        for (j, &y) in b.iter().enumerate() {
            let up = row[j + 1];
            row[j + 1] = if x == y { diag + 1 } else { up.max(row[j]) };
            diag = up;
        }
    }
    row[b.len()]
}
