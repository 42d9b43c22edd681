//! Digits match: how many of the numbers mentioned by two entities agree.

use std::sync::LazyLock;

use regex::Regex;

use crate::profile::EntityProfile;

static NUMBER: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\d+(?:[.,]\d+)?").expect("static regex"));

/// Longest digit run kept; longer runs (serial numbers, URNs) are skipped.
const MAX_DIGITS: usize = 30;

/// An exact decimal: `mantissa / 10^scale`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Number {
    pub mantissa: u128,
    pub scale: u32,
}

impl Number {
    pub fn parse(text: &str) -> Option<Self> {
        let (int, frac) = match text.find(['.', ',']) {
            Some(at) => (&text[..at], &text[at + 1..]),
            None => (text, ""),
        };
        if int.is_empty() || int.len() + frac.len() > MAX_DIGITS {
            return None;
        }
        if !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
            return None;
        }
        let mantissa = format!("{int}{frac}").parse().ok()?;
        Some(Self {
            mantissa,
            scale: frac.len() as u32,
        })
    }

    fn pow10(n: u32) -> u128 {
        10u128.pow(n)
    }

    /// Value rounded half-up to two decimals, as hundredths.
    pub fn hundredths(self) -> u128 {
        if self.scale <= 2 {
            self.mantissa * Self::pow10(2 - self.scale)
        } else {
            let div = Self::pow10(self.scale - 2);
            (self.mantissa + div / 2) / div
        }
    }

    /// Drops decimals beyond `scale`.
    pub fn truncate(self, scale: u32) -> Self {
        if scale >= self.scale {
            return self;
        }
        Self {
            mantissa: self.mantissa / Self::pow10(self.scale - scale),
            scale,
        }
    }

    /// Equal after rounding to two decimals, or one is a truncation of the
    /// other.
    pub fn matches(self, other: Self) -> bool {
        if self.hundredths() == other.hundredths() {
            return true;
        }
        let (short, long) = if self.scale <= other.scale { (self, other) } else { (other, self) };
        long.truncate(short.scale) == short
    }
}

/// Every decimal number in `text`, once per distinct spelling, in order of
/// first appearance.
pub fn extract_numbers(text: &str) -> Vec<Number> {
    let mut seen = std::collections::HashSet::new();
    NUMBER
        .find_iter(text)
        .filter(|m| seen.insert(m.as_str()))
        .filter_map(|m| Number::parse(m.as_str()))
        .collect()
}

/// Matched count over the larger multiset, or `None` when either side has
/// no numbers.
pub fn digits_ratio(a: &[Number], b: &[Number]) -> Option<f64> {
    if a.is_empty() || b.is_empty() {
        return None;
    }
    Some(max_matching(a, b) as f64 / a.len().max(b.len()) as f64)
}

pub fn digits_match(left: &EntityProfile, right: &EntityProfile) -> Option<f64> {
    digits_ratio(&left.numbers, &right.numbers)
}

/// Maximum bipartite matching under [`Number::matches`] (Kuhn's algorithm).
fn max_matching(a: &[Number], b: &[Number]) -> usize {
    let adj: Vec<Vec<usize>> = a
        .iter()
        .map(|x| (0..b.len()).filter(|&j| x.matches(b[j])).collect())
        .collect();
    let mut owner: Vec<Option<usize>> = vec![None; b.len()];
    let mut matched = 0;
    for i in 0..a.len() {
        let mut visited = vec![false; b.len()];
        if augment(i, &adj, &mut owner, &mut visited) {
            matched += 1;
        }
    }
    matched
}

fn augment(i: usize, adj: &[Vec<usize>], owner: &mut [Option<usize>], visited: &mut [bool]) -> bool {
    for &j in &adj[i] {
        if visited[j] {
            continue;
        }
        visited[j] = true;
        if owner[j].is_none_or(|k| augment(k, adj, owner, visited)) {
            owner[j] = Some(i);
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nums(text: &str) -> Vec<Number> {
        extract_numbers(text)
    }

    #[test]
    fn parsing() {
        assert_eq!(Number::parse("1.52"), Some(Number { mantissa: 152, scale: 2 }));
        assert_eq!(Number::parse("0,85"), Some(Number { mantissa: 85, scale: 2 }));
        assert_eq!(Number::parse("2003"), Some(Number { mantissa: 2003, scale: 0 }));
        assert_eq!(nums("1.52-m reflector, 1.52 m telescope").len(), 1);
    }

    #[test]
    fn rounding_and_truncation() {
        let n = |s| Number::parse(s).unwrap();
        assert!(n("1.52").matches(n("1.524")));
        assert!(n("1.5").matches(n("1.52")));
        assert!(n("1").matches(n("1.52")));
        assert!(n("3.6").matches(n("3.60")));
        assert!(!n("1.52").matches(n("1.53")));
        assert!(!n("1").matches(n("2")));
        assert!(n("1.525").matches(n("1.53")));
    }

    #[test]
    fn worked_ratios() {
        assert_eq!(digits_ratio(&nums("1.52"), &nums("1.52")), Some(1.0));
        assert_eq!(digits_ratio(&nums("Voyager 1"), &nums("Voyager 2")), Some(0.0));
        assert_eq!(digits_ratio(&nums("0.85 and 2003"), &nums("0.85")), Some(0.5));
        assert_eq!(digits_ratio(&nums("no digits"), &nums("0.85")), None);
    }

    #[test]
    fn matching_is_maximal() {
        // greedy would pair 1 with 1.5 and leave 1.2 unmatched
        assert_eq!(digits_ratio(&nums("1 1.5"), &nums("1.5 1.2")), Some(1.0));
    }
}
