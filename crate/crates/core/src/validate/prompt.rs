//! The validator prompt: instruction, two entity blocks, answer format.

use std::fmt::Write;

use crate::model::Entity;

pub const INSTRUCTION: &str = "You are reviewing two records taken from different catalogs of astronomical observation facilities. Decide whether both records describe the same physical facility.";

pub const PART_OF_CAVEAT: &str = "A facility that is a component of another facility is DISTINCT from the facility containing it: an instrument is not its telescope, a telescope is not its observatory, and a spacecraft is not the mission it belongs to.";

pub const ANSWER_FORMAT: &str = "Answer with SAME or DISTINCT as the very first word, followed by one line explaining the decision.";

pub const FORMAT_REMINDER: &str = "Your previous answer could not be read. Reply again, starting with exactly one word, SAME or DISTINCT, then one line of justification.";

/// Deterministic prompt for one pair. Empty fields are omitted.
pub fn build_prompt(left: &Entity, right: &Entity) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{INSTRUCTION}\n{PART_OF_CAVEAT}\n");
    entity_block(&mut out, "Entity A", left);
    out.push('\n');
    entity_block(&mut out, "Entity B", right);
    let _ = write!(out, "\n{ANSWER_FORMAT}\n");
    out
}

fn join<'a>(items: impl IntoIterator<Item = &'a String>) -> String {
    items.into_iter().map(String::as_str).collect::<Vec<_>>().join("; ")
}

fn entity_block(out: &mut String, title: &str, e: &Entity) {
    let _ = writeln!(out, "{title}:");
    let mut field = |name: &str, value: String| {
        if !value.is_empty() {
            let _ = writeln!(out, "- {name}: {value}");
        }
    };
    field("id", e.id.to_string());
    field("label", e.pref_label.clone());
    field("alternate labels", join(&e.alt_labels));
    field("notations", join(&e.notations));
    if e.class.is_known() {
        field("class", e.class.as_str().to_owned());
    }
    let ids: Vec<String> = e.external_ids.iter().map(|(s, v)| format!("{s} {v}")).collect();
    field("identifiers", ids.join("; "));
    if let (Some(lat), Some(lon)) = (e.latitude, e.longitude) {
        field("coordinates", format!("{lat}, {lon}"));
    }
    field("altitude (m)", e.altitude.map(|a| a.to_string()).unwrap_or_default());
    field("location", e.location_name.clone().unwrap_or_default());
    field("aperture", e.aperture.as_ref().map(|a| a.text.clone()).unwrap_or_default());
    field("launch year", e.launch_year.map(|y| y.to_string()).unwrap_or_default());
    field("start year", e.start_year.map(|y| y.to_string()).unwrap_or_default());
    field("end year", e.end_year.map(|y| y.to_string()).unwrap_or_default());
    field("wavebands", join(&e.wavebands));
    field("funding agency", e.funding_agency.clone().unwrap_or_default());
    field("description", e.description.clone().unwrap_or_default());
    let parents: Vec<String> = e.part_of.iter().map(ToString::to_string).collect();
    field("part of", parents.join("; "));
    field("url", e.url.clone().unwrap_or_default());
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Aperture;

    fn la_silla() -> (Entity, Entity) {
        let mut aas = Entity::new(
            "aas:european-southern-observatory-1.52m-telescope-at-la-silla-observatory".parse().unwrap(),
            "European Southern Observatory 1.52m Telescope at La Silla Observatory",
        )
        .with_coordinates(-29.2552104, -70.739507);
        aas.location_name = Some("South America".into());
        aas.aperture = Some(Aperture::new(1.52, "1.52m"));
        let mut pds = Entity::new(
            "pds:1.52-m-spectrographic-cassegrain-coude-reflector".parse().unwrap(),
            "1.52-m spectrographic Cassegrain/Coude reflector",
        );
        pds.location_name = Some("Earth".into());
        pds.aperture = Some(Aperture::new(1.52, "1.52m"));
        (pds, aas)
    }

    #[test]
    fn contains_both_entities() {
        let (pds, aas) = la_silla();
        let p = build_prompt(&pds, &aas);
        assert_eq!(p.matches("- aperture: 1.52m").count(), 2);
        assert!(p.contains("- location: South America"));
        assert!(p.contains("- location: Earth"));
        assert!(p.contains(PART_OF_CAVEAT));
        assert!(!p.contains("description"));
        assert_eq!(p, build_prompt(&pds, &aas));
    }
}
