//! Canonical line-delimited record format.
//!
//! One JSON object per line. Reserved keys map onto [`Entity`] fields;
//! any other key is kept verbatim in [`Entity::extras`].

use std::collections::{BTreeSet, HashSet};
use std::io::{BufRead, Write};

use serde_json::{Map, Number, Value};

use super::enrich::parse_aperture_text;
use super::IngestError;
use crate::clock::{format_timestamp, parse_timestamp};
use crate::model::{
    normalize_longitude, slugify, Aperture, Entity, EntityId, FacilityClass, IdScheme, SourceId,
};

/// Keys with a dedicated [`Entity`] field.
pub const RESERVED_KEYS: &[&str] = &[
    "uri",
    "source",
    "pref_label",
    "alt_labels",
    "notations",
    "class",
    "naif_id",
    "cospar_id",
    "nssdca_id",
    "mpc_id",
    "lat",
    "lon",
    "alt",
    "location_name",
    "aperture",
    "launch_year",
    "start_year",
    "end_year",
    "wavebands",
    "funding_agency",
    "description",
    "part_of",
    "exact_match",
    "url",
    "modified",
    "deprecated",
    "type_confidence",
    "location_confidence",
];

struct Fields<'a> {
    map: &'a Map<String, Value>,
    line: usize,
}

impl<'a> Fields<'a> {
    fn err(&self, field: &str, message: impl Into<String>) -> IngestError {
        IngestError::Field {
            line: self.line,
            field: field.to_owned(),
            message: message.into(),
        }
    }

    fn string(&self, key: &str) -> Result<Option<String>, IngestError> {
        match self.map.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(Value::String(s)) if s.trim().is_empty() => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(Value::Number(n)) => Ok(Some(n.to_string())),
            Some(_) => Err(self.err(key, "expected a string")),
        }
    }

    fn strings(&self, key: &str) -> Result<BTreeSet<String>, IngestError> {
        match self.map.get(key) {
            None | Some(Value::Null) => Ok(BTreeSet::new()),
            Some(Value::String(s)) => Ok(std::iter::once(s.trim().to_owned()).filter(|s| !s.is_empty()).collect()),
            Some(Value::Array(items)) => items
                .iter()
                .map(|item| match item {
                    Value::String(s) => Ok(s.trim().to_owned()),
                    Value::Number(n) => Ok(n.to_string()),
                    _ => Err(self.err(key, "expected an array of strings")),
                })
                .filter(|s| !matches!(s, Ok(s) if s.is_empty()))
                .collect(),
            Some(_) => Err(self.err(key, "expected an array of strings")),
        }
    }

    fn float(&self, key: &str) -> Result<Option<f64>, IngestError> {
        let value = match self.map.get(key) {
            None | Some(Value::Null) => return Ok(None),
            Some(Value::Number(n)) => n.as_f64(),
            Some(Value::String(s)) if s.trim().is_empty() => return Ok(None),
            Some(Value::String(s)) => s.trim().parse::<f64>().ok(),
            Some(_) => None,
        };
        match value {
            Some(v) if v.is_finite() => Ok(Some(v)),
            _ => Err(self.err(key, "expected a finite number")),
        }
    }

    fn year(&self, key: &str) -> Result<Option<i32>, IngestError> {
        match self.float(key)? {
            None => Ok(None),
            Some(v) if v.fract() == 0.0 && (-9999.0..=9999.0).contains(&v) => Ok(Some(v as i32)),
            Some(_) => Err(self.err(key, "expected an integer year")),
        }
    }

    fn boolean(&self, key: &str) -> Result<bool, IngestError> {
        match self.map.get(key) {
            None | Some(Value::Null) => Ok(false),
            Some(Value::Bool(b)) => Ok(*b),
            Some(Value::String(s)) if s.eq_ignore_ascii_case("true") => Ok(true),
            Some(Value::String(s)) if s.eq_ignore_ascii_case("false") => Ok(false),
            Some(_) => Err(self.err(key, "expected a boolean")),
        }
    }

    fn entity_ids(&self, key: &str, source: &SourceId) -> Result<BTreeSet<EntityId>, IngestError> {
        self.strings(key)?
            .iter()
            .map(|s| EntityId::parse_in(s, Some(source)).map_err(|e| self.err(key, e.to_string())))
            .collect()
    }
}

/// Parses one record.
///
/// `default_source` applies when the record has no `source` key; when both
/// are present they must agree. A missing `uri` is derived from the
/// preferred label, avoiding the slugs already in `taken`.
pub fn entity_from_value(
    value: &Value,
    line: usize,
    default_source: Option<&SourceId>,
    taken: &HashSet<String>,
) -> Result<Entity, IngestError> {
    let map = value.as_object().ok_or(IngestError::Field {
        line,
        field: "<record>".into(),
        message: "expected a JSON object".into(),
    })?;
    let f = Fields { map, line };

    let source = match (f.string("source")?, default_source) {
        (Some(s), Some(default)) => {
            let s = SourceId::new(&s).map_err(|e| f.err("source", e.to_string()))?;
            if &s != default {
                return Err(f.err("source", format!("record source {s} inside a {default} snapshot")));
            }
            s
        }
        (Some(s), None) => SourceId::new(&s).map_err(|e| f.err("source", e.to_string()))?,
        (None, Some(default)) => default.clone(),
        (None, None) => return Err(f.err("source", "missing")),
    };

    let pref_label = f
        .string("pref_label")?
        .map(|s| s.trim().to_owned())
        .ok_or_else(|| f.err("pref_label", "missing or empty"))?;

    let mut external_ids = std::collections::BTreeMap::new();
    for scheme in IdScheme::ALL {
        if let Some(value) = f.string(scheme.record_key())? {
            external_ids.insert(scheme, value.trim().to_owned());
        }
    }

    let id = match f.string("uri")? {
        Some(uri) => {
            let id = EntityId::parse_in(&uri, Some(&source)).map_err(|e| f.err("uri", e.to_string()))?;
            if id.source() != &source {
                return Err(f.err("uri", format!("namespace of {id} differs from source {source}")));
            }
            id
        }
        None => {
            let fallback = [IdScheme::Nssdca, IdScheme::Cospar, IdScheme::Naif, IdScheme::Mpc]
                .iter()
                .find_map(|s| external_ids.get(s).cloned());
            let slug = slugify(&pref_label, taken, fallback.as_deref()).map_err(|e| f.err("uri", e.to_string()))?;
            EntityId::new(source.clone(), slug)
        }
    };

    let mut entity = Entity::new(id, pref_label);
    for label in f.strings("alt_labels")? {
        entity.add_alt_label(label);
    }
    entity.notations = f.strings("notations")?;
    entity.class = match f.string("class")? {
        Some(class) => class
            .parse::<FacilityClass>()
            .map_err(|e| f.err("class", e.to_string()))?,
        None => FacilityClass::Unknown,
    };
    entity.external_ids = external_ids;

    entity.latitude = f.float("lat")?;
    if let Some(lat) = entity.latitude {
        if !(-90.0..=90.0).contains(&lat) {
            return Err(f.err("lat", "latitude outside [-90, 90]"));
        }
    }
    entity.longitude = f.float("lon")?.map(normalize_longitude);
    entity.altitude = f.float("alt")?;
    entity.location_name = f.string("location_name")?;
    entity.aperture = match map.get("aperture") {
        None | Some(Value::Null) => None,
        Some(Value::Number(n)) => {
            let meters = n.as_f64().filter(|m| *m > 0.0).ok_or_else(|| f.err("aperture", "expected a positive size"))?;
            Some(Aperture::new(meters, n.to_string()))
        }
        Some(Value::String(text)) => Some(
            parse_aperture_text(text)
                .map(|meters| Aperture::new(meters, text.trim()))
                .ok_or_else(|| f.err("aperture", format!("cannot read a size in meters from {text:?}")))?,
        ),
        Some(_) => return Err(f.err("aperture", "expected a string or number")),
    };
    entity.launch_year = f.year("launch_year")?;
    entity.start_year = f.year("start_year")?;
    entity.end_year = f.year("end_year")?;
    entity.wavebands = f.strings("wavebands")?;
    entity.funding_agency = f.string("funding_agency")?;
    entity.description = f.string("description")?;
    entity.part_of = f.entity_ids("part_of", &source)?;
    entity.exact_match = f.entity_ids("exact_match", &source)?;
    entity.url = f.string("url")?;
    entity.modified = match f.string("modified")? {
        Some(ts) => Some(parse_timestamp(&ts).ok_or_else(|| f.err("modified", format!("unreadable timestamp {ts:?}")))?),
        None => None,
    };
    entity.deprecated = f.boolean("deprecated")?;
    for (key, slot) in [
        ("type_confidence", &mut entity.type_confidence),
        ("location_confidence", &mut entity.location_confidence),
    ] {
        *slot = f.float(key)?;
        if let Some(c) = *slot {
            if !(0.0..=1.0).contains(&c) {
                return Err(f.err(key, "confidence outside [0, 1]"));
            }
        }
    }
    for (key, value) in map {
        if !RESERVED_KEYS.contains(&key.as_str()) {
            entity.extras.insert(key.clone(), value.clone());
        }
    }
    Ok(entity)
}

fn number(v: f64) -> Value {
    Number::from_f64(v).map(Value::Number).unwrap_or(Value::Null)
}

fn string_array(items: impl IntoIterator<Item = impl ToString>) -> Value {
    Value::Array(items.into_iter().map(|s| Value::String(s.to_string())).collect())
}

/// Serializes an entity back to a record. Empty fields are omitted; keys
/// come out in a fixed order.
pub fn entity_to_value(entity: &Entity) -> Value {
    let mut map = Map::new();
    let mut put = |key: &str, value: Value| {
        map.insert(key.to_owned(), value);
    };
    put("uri", Value::String(entity.id.slug().to_owned()));
    put("source", Value::String(entity.source().to_string()));
    put("pref_label", Value::String(entity.pref_label.clone()));
    if !entity.alt_labels.is_empty() {
        put("alt_labels", string_array(&entity.alt_labels));
    }
    if !entity.notations.is_empty() {
        put("notations", string_array(&entity.notations));
    }
    if entity.class.is_known() {
        put("class", Value::String(entity.class.as_str().to_owned()));
    }
    for (scheme, value) in &entity.external_ids {
        put(scheme.record_key(), Value::String(value.clone()));
    }
    if let Some(v) = entity.latitude {
        put("lat", number(v));
    }
    if let Some(v) = entity.longitude {
        put("lon", number(v));
    }
    if let Some(v) = entity.altitude {
        put("alt", number(v));
    }
    if let Some(v) = &entity.location_name {
        put("location_name", Value::String(v.clone()));
    }
    if let Some(a) = &entity.aperture {
        put("aperture", Value::String(a.text.clone()));
    }
    for (key, year) in [
        ("launch_year", entity.launch_year),
        ("start_year", entity.start_year),
        ("end_year", entity.end_year),
    ] {
        if let Some(y) = year {
            put(key, Value::Number(y.into()));
        }
    }
    if !entity.wavebands.is_empty() {
        put("wavebands", string_array(&entity.wavebands));
    }
    if let Some(v) = &entity.funding_agency {
        put("funding_agency", Value::String(v.clone()));
    }
    if let Some(v) = &entity.description {
        put("description", Value::String(v.clone()));
    }
    if !entity.part_of.is_empty() {
        put("part_of", string_array(&entity.part_of));
    }
    if !entity.exact_match.is_empty() {
        put("exact_match", string_array(&entity.exact_match));
    }
    if let Some(v) = &entity.url {
        put("url", Value::String(v.clone()));
    }
    if let Some(ts) = &entity.modified {
        put("modified", Value::String(format_timestamp(ts)));
    }
    if entity.deprecated {
        put("deprecated", Value::Bool(true));
    }
    if let Some(v) = entity.type_confidence {
        put("type_confidence", number(v));
    }
    if let Some(v) = entity.location_confidence {
        put("location_confidence", number(v));
    }
    for (key, value) in &entity.extras {
        put(key, value.clone());
    }
    Value::Object(map)
}

/// Reads records from a line-delimited stream; blank lines are skipped.
/// Duplicate ids are an error naming both lines.
pub fn read_records<R: BufRead>(reader: R, default_source: Option<&SourceId>) -> Result<Vec<Entity>, IngestError> {
    let mut entities = Vec::new();
    let mut lines_of: std::collections::HashMap<EntityId, usize> = std::collections::HashMap::new();
    let mut taken: std::collections::HashMap<SourceId, HashSet<String>> = std::collections::HashMap::new();
    for (index, line) in reader.lines().enumerate() {
        let line_no = index + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let value: Value = serde_json::from_str(&line).map_err(|e| IngestError::Json {
            line: line_no,
            message: e.to_string(),
        })?;
        let source_hint = value
            .get("source")
            .and_then(Value::as_str)
            .and_then(|s| SourceId::new(s).ok())
            .or_else(|| default_source.cloned());
        let empty = HashSet::new();
        let taken_here = source_hint.as_ref().and_then(|s| taken.get(s)).unwrap_or(&empty);
        let entity = entity_from_value(&value, line_no, default_source, taken_here)?;
        if let Some(first) = lines_of.insert(entity.id.clone(), line_no) {
            return Err(IngestError::DuplicateUri {
                uri: entity.id.to_string(),
                first_line: first,
                second_line: line_no,
            });
        }
        taken
            .entry(entity.source().clone())
            .or_default()
            .insert(entity.id.slug().to_owned());
        entities.push(entity);
    }
    Ok(entities)
}

/// Writes one record per line, in the order given.
pub fn write_records<'a, W: Write>(mut writer: W, entities: impl IntoIterator<Item = &'a Entity>) -> std::io::Result<()> {
    for entity in entities {
        serde_json::to_writer(&mut writer, &entity_to_value(entity))?;
        writer.write_all(b"\n")?;
    }
    writer.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(line: &str) -> Result<Vec<Entity>, IngestError> {
        read_records(line.as_bytes(), None)
    }

    #[test]
    fn la_silla_coordinates() {
        let es = parse(r#"{"uri":"eso-152","source":"aas","pref_label":"ESO 1.52m","lat":"-29.2552104","lon":"-70.739507"}"#).unwrap();
        assert_eq!(es[0].latitude, Some(-29.2552104));
        assert_eq!(es[0].longitude, Some(-70.739507));
    }

    #[test]
    fn longitude_in_0_360_is_normalized() {
        let es = parse(r#"{"uri":"r","source":"pds","pref_label":"R","lat":-29.255028,"lon":"289.267975"}"#).unwrap();
        assert!((es[0].longitude.unwrap() - (-70.732025)).abs() < 1e-9);
    }

    #[test]
    fn empty_stream() {
        assert!(parse("").unwrap().is_empty());
        assert!(parse("\n\n").unwrap().is_empty());
    }

    #[test]
    fn malformed_field_names_line_and_field() {
        let text = "{\"uri\":\"a\",\"source\":\"aas\",\"pref_label\":\"A\"}\n{\"uri\":\"b\",\"source\":\"aas\",\"pref_label\":\"B\",\"lat\":\"north\"}";
        match parse(text).unwrap_err() {
            IngestError::Field { line, field, .. } => {
                assert_eq!(line, 2);
                assert_eq!(field, "lat");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("{not json"), Err(IngestError::Json { line: 1, .. })));
        assert!(matches!(parse(r#"{"uri":"a","source":"aas"}"#), Err(IngestError::Field { .. })));
    }

    #[test]
    fn duplicate_uri_names_both_lines() {
        let text = "{\"uri\":\"a\",\"source\":\"aas\",\"pref_label\":\"A\"}\n\n{\"uri\":\"a\",\"source\":\"aas\",\"pref_label\":\"A2\"}";
        match parse(text).unwrap_err() {
            IngestError::DuplicateUri { uri, first_line, second_line } => {
                assert_eq!(uri, "aas:a");
                assert_eq!((first_line, second_line), (1, 3));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_uri_is_slugified_and_deduplicated() {
        let text = "{\"source\":\"pds\",\"pref_label\":\"Voyager\"}\n{\"source\":\"pds\",\"pref_label\":\"Voyager\",\"nssdca_id\":\"1977-084A\"}";
        let es = parse(text).unwrap();
        assert_eq!(es[0].id.to_string(), "pds:voyager");
        assert_eq!(es[1].id.to_string(), "pds:voyager-1977-084a");
    }

    #[test]
    fn unknown_fields_survive_round_trip() {
        let line = r#"{"uri":"x","source":"pds","pref_label":"X","coordinate_source":"Astronomical","alt":2347,"aperture":"1.52m","part_of":["pds:eso"]}"#;
        let e = &parse(line).unwrap()[0];
        assert_eq!(e.extras["coordinate_source"], "Astronomical");
        assert_eq!(e.aperture.as_ref().unwrap().meters, 1.52);
        let mut out = Vec::new();
        write_records(&mut out, [e]).unwrap();
        let again = read_records(out.as_slice(), None).unwrap();
        assert_eq!(&again[0], e);
    }

    #[test]
    fn snapshot_source_enforced() {
        let pds = SourceId::new("pds").unwrap();
        let err = read_records(r#"{"uri":"x","source":"aas","pref_label":"X"}"#.as_bytes(), Some(&pds)).unwrap_err();
        assert!(matches!(err, IngestError::Field { ref field, .. } if field == "source"));
    }
}
