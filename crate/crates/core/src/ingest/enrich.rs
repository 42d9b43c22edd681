//! String-parsing enrichment: aliases mined from parenthesized label
//! segments, apertures, and COSPAR-style spacecraft identifiers.

use std::collections::BTreeSet;
use std::sync::LazyLock;

use regex::Regex;

use crate::model::{Aperture, Entity, IdScheme};

/// Trailing boilerplate removed from full labels.
const BOILERPLATE_SUFFIXES: &[&str] = &["Satellite Mission"];

static APERTURE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?:^|[^\w.])(\d+(?:[.,]\d+)?)(?:\s?-\s?|\s)?m\b").unwrap()
});

static BARE_SIZE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^\s*(\d+(?:[.,]\d+)?)\s*(?:-?\s*m(?:eters?|etres?)?)?\s*$").unwrap());

static FORMERLY: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^(?P<now>.+?)\s+formerly\s+(?P<was>.+?)(?:\s+or\s+(?P<alt>.+))?$").unwrap()
});

static COSPAR: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^\s*(\d{4})-(\d{3})([A-Z]{1,3})\s*$").unwrap());

#[derive(Debug, Clone, PartialEq)]
pub struct LabelEnrichment {
    pub clean_label: String,
    pub alt_labels: BTreeSet<String>,
    pub aperture: Option<Aperture>,
}

fn parse_decimal(text: &str) -> Option<f64> {
    text.replace(',', ".").parse::<f64>().ok().filter(|v| *v > 0.0)
}

/// First `<number>m` token (`0.85m`, `1.52-m`, `1.52 m`, decimal comma
/// allowed) in `text`, in meters.
pub fn find_aperture(text: &str) -> Option<Aperture> {
    APERTURE.captures_iter(text).find_map(|caps| {
        let number = caps.get(1)?.as_str();
        let meters = parse_decimal(number)?;
        Some(Aperture::new(meters, format!("{}m", number.replace(',', "."))))
    })
}

/// Reads a stored aperture value: `1.52m`, `1.52 m`, `1.52`, `3.6-m`.
pub fn parse_aperture_text(text: &str) -> Option<f64> {
    BARE_SIZE
        .captures(text)
        .and_then(|caps| parse_decimal(caps.get(1)?.as_str()))
}

fn strip_boilerplate(text: &str) -> &str {
    let mut text = text.trim();
    for suffix in BOILERPLATE_SUFFIXES {
        if let Some(head) = text.strip_suffix(suffix) {
            text = head.trim_end();
        }
    }
    text
}

/// Splits `X (Y) Z` at the first balanced, unnested parenthesis.
fn split_parenthetical(text: &str) -> Option<(&str, &str, &str)> {
    let open = text.find('(')?;
    let close = open + text[open..].find(')')?;
    let inner = &text[open + 1..close];
    if inner.contains('(') || inner.trim().is_empty() {
        return None;
    }
    Some((&text[..open], inner.trim(), &text[close + 1..]))
}

/// Mines a full catalog label.
///
/// Recognized parentheticals are `(X)`, `(X formerly Y)` and
/// `(X formerly Y or Z)`; other shapes are left in the label. The full
/// label is kept as an alias whenever the clean label differs from it.
pub fn parse_label_enrichment(full_label: &str) -> LabelEnrichment {
    let full = full_label.trim();
    let aperture = find_aperture(full);
    let mut alt_labels = BTreeSet::new();

    let clean_label = match split_parenthetical(full) {
        Some((before, inner, after)) => {
            let head = before.trim();
            let tail = strip_boilerplate(after);
            let clean = [head, tail]
                .iter()
                .filter(|s| !s.is_empty())
                .copied()
                .collect::<Vec<_>>()
                .join(" ");
            if clean.is_empty() {
                full.to_owned()
            } else if let Some(caps) = FORMERLY.captures(inner) {
                let now = caps["now"].trim();
                let was = caps["was"].trim();
                alt_labels.insert(now.to_owned());
                alt_labels.insert(was.to_owned());
                alt_labels.insert(format!("{clean} ({now})"));
                if let Some(alt) = caps.name("alt") {
                    let alt = alt.as_str().trim();
                    alt_labels.insert(alt.to_owned());
                    alt_labels.insert(format!("{was} ({alt})"));
                }
                clean
            } else if !inner.contains(',') && inner.chars().any(char::is_alphabetic) {
                alt_labels.insert(inner.to_owned());
                alt_labels.insert(format!("{clean} ({inner})"));
                clean
            } else {
                // Dates, coordinates and lists stay in the label.
                full.to_owned()
            }
        }
        None => strip_boilerplate(full).to_owned(),
    };
    let clean_label = if clean_label.is_empty() { full.to_owned() } else { clean_label };
    if clean_label != full {
        alt_labels.insert(full.to_owned());
    }
    alt_labels.remove(&clean_label);
    LabelEnrichment {
        clean_label,
        alt_labels,
        aperture,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpacecraftAlias {
    pub nssdc_id: Option<String>,
    pub launch_year: Option<i32>,
}

/// Recognizes `YYYY-NNNL` launch designators (e.g. `1980-090A`) and
/// derives the launch year from them.
pub fn parse_spacecraft_alias(alias: &str) -> SpacecraftAlias {
    match COSPAR.captures(alias) {
        Some(caps) => {
            let year: i32 = caps[1].parse().unwrap_or(0);
            if (1957..=2199).contains(&year) {
                SpacecraftAlias {
                    nssdc_id: Some(format!("{}-{}{}", &caps[1], &caps[2], &caps[3])),
                    launch_year: Some(year),
                }
            } else {
                SpacecraftAlias { nssdc_id: None, launch_year: None }
            }
        }
        None => SpacecraftAlias { nssdc_id: None, launch_year: None },
    }
}

/// Applies label mining and designator parsing to one entity. Fields that
/// are already set are never overwritten, so the step is idempotent.
pub fn enrich_entity(entity: &mut Entity) {
    let mined = parse_label_enrichment(&entity.pref_label);
    if mined.clean_label != entity.pref_label {
        let old = std::mem::replace(&mut entity.pref_label, mined.clean_label);
        entity.alt_labels.remove(&entity.pref_label);
        entity.add_alt_label(old);
    }
    for alias in mined.alt_labels {
        entity.add_alt_label(alias);
    }
    if entity.aperture.is_none() {
        entity.aperture = mined.aperture;
    }

    let designators: BTreeSet<(String, i32)> = entity
        .alt_labels
        .iter()
        .chain(entity.notations.iter())
        .map(|a| parse_spacecraft_alias(a))
        .filter_map(|a| Some((a.nssdc_id?, a.launch_year?)))
        .collect();
    // Several distinct designators are ambiguous; leave them as aliases.
    if designators.len() == 1 {
        let (id, year) = designators.into_iter().next().expect("one designator");
        entity.external_ids.entry(IdScheme::Nssdca).or_insert(id);
        if entity.launch_year.is_none() {
            entity.launch_year = Some(year);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPITZER: &str = "NASA 0.85m Spitzer Space Telescope (SST formerly Space Infrared Telescope Facility or SIRTIF) Satellite Mission";

    #[test]
    fn spitzer_full_label() {
        let e = parse_label_enrichment(SPITZER);
        assert_eq!(e.clean_label, "NASA 0.85m Spitzer Space Telescope");
        for alias in [
            "SST",
            "SIRTIF",
            "Space Infrared Telescope Facility",
            "Space Infrared Telescope Facility (SIRTIF)",
            "NASA 0.85m Spitzer Space Telescope (SST)",
            SPITZER,
        ] {
            assert!(e.alt_labels.contains(alias), "missing {alias}: {:?}", e.alt_labels);
        }
        assert_eq!(e.alt_labels.len(), 6);
        assert_eq!(e.aperture.unwrap().meters, 0.85);
    }

    #[test]
    fn plain_label_untouched() {
        let e = parse_label_enrichment("Plain Name");
        assert_eq!(e.clean_label, "Plain Name");
        assert!(e.alt_labels.is_empty());
        assert!(e.aperture.is_none());
    }

    #[test]
    fn aperture_spellings() {
        let e = parse_label_enrichment("1.52-m spectrographic Cassegrain/Coude reflector");
        let a = e.aperture.unwrap();
        assert_eq!(a.meters, 1.52);
        assert_eq!(a.text, "1.52m");
        assert_eq!(find_aperture("a 1.52 m telescope").unwrap().meters, 1.52);
        assert_eq!(find_aperture("Telescopio 3,58m").unwrap().meters, 3.58);
        assert_eq!(find_aperture("4-m Mayall").unwrap().meters, 4.0);
        assert!(find_aperture("urn:eso.1m52").is_none());
        assert!(find_aperture("1.52 mirror").is_none());
        assert!(find_aperture("Mariner 10").is_none());
    }

    #[test]
    fn stored_aperture_text() {
        assert_eq!(parse_aperture_text("1.52m"), Some(1.52));
        assert_eq!(parse_aperture_text("1.52"), Some(1.52));
        assert_eq!(parse_aperture_text(" 3.6-m "), Some(3.6));
        assert_eq!(parse_aperture_text("big"), None);
    }

    #[test]
    fn simple_and_formerly_idioms() {
        let e = parse_label_enrichment("Infrared Telescope Facility (IRTF)");
        assert_eq!(e.clean_label, "Infrared Telescope Facility");
        assert!(e.alt_labels.contains("IRTF"));
        let e = parse_label_enrichment("Mariner Jupiter-Saturn (Voyager formerly MJS77)");
        assert!(e.alt_labels.contains("Voyager"));
        assert!(e.alt_labels.contains("MJS77"));
        assert!(!e.alt_labels.contains("MJS77 ()"));
    }

    #[test]
    fn other_parentheticals_left_intact() {
        let e = parse_label_enrichment("Hooker Telescope (1917-1985)");
        assert_eq!(e.clean_label, "Hooker Telescope (1917-1985)");
        assert!(e.alt_labels.is_empty());
        let e = parse_label_enrichment("Magnetometer (Nain, Canada)");
        assert_eq!(e.clean_label, "Magnetometer (Nain, Canada)");
        let e = parse_label_enrichment("Two Micron All Sky Survey (2MASS)");
        assert!(e.alt_labels.contains("2MASS"));
    }

    #[test]
    fn mined_aliases_come_from_the_input() {
        let e = parse_label_enrichment(SPITZER);
        let words: BTreeSet<&str> = SPITZER.split(|c: char| !c.is_alphanumeric() && c != '.').collect();
        for alias in &e.alt_labels {
            for word in alias.split(|c: char| !c.is_alphanumeric() && c != '.') {
                assert!(words.contains(word), "{word} not in input");
            }
        }
    }

    #[test]
    fn spacecraft_designators() {
        let cosmos = parse_spacecraft_alias("1980-090A");
        assert_eq!(cosmos.nssdc_id.as_deref(), Some("1980-090A"));
        assert_eq!(cosmos.launch_year, Some(1980));
        let v1 = parse_spacecraft_alias("1977-084A");
        assert_eq!((v1.nssdc_id.as_deref(), v1.launch_year), (Some("1977-084A"), Some(1977)));
        let none = parse_spacecraft_alias("COSMOS 1221");
        assert_eq!((none.nssdc_id, none.launch_year), (None, None));
        assert_eq!(parse_spacecraft_alias("1234-567A").launch_year, None);
    }

    #[test]
    fn entity_enrichment_is_idempotent() {
        let mut e = Entity::new("aas:spitzer".parse().unwrap(), SPITZER).with_notation("Spitzer");
        enrich_entity(&mut e);
        assert_eq!(e.pref_label, "NASA 0.85m Spitzer Space Telescope");
        assert_eq!(e.aperture.as_ref().unwrap().text, "0.85m");
        let once = e.clone();
        enrich_entity(&mut e);
        assert_eq!(e, once);
        assert!(e.check().is_ok());

        let mut sc = Entity::new("pds:cosmos-1221".parse().unwrap(), "COSMOS 1221").with_alt_label("1980-090A");
        enrich_entity(&mut sc);
        assert_eq!(sc.external_ids[&IdScheme::Nssdca], "1980-090A");
        assert_eq!(sc.launch_year, Some(1980));
    }
}
