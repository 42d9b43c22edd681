//! SSSOM mapping documents: a Turtle-style record file and a TSV table.

use std::collections::BTreeSet;
use std::fmt::Write;

use super::record::{sort_records, MappingRecord, RecordError, SimilarityMeasure, LEXICAL_MATCHING};
use crate::clock::format_timestamp;

pub const OBSF_NS: &str = "https://voparis-ns.obspm.fr/rdf/obsfacilities#";

const FIXED_PREFIXES: [(&str, &str); 6] = [
    ("obsf", OBSF_NS),
    ("rdfs", "http://www.w3.org/2000/01/rdf-schema#"),
    ("semapv", "https://w3id.org/semapv/vocab/"),
    ("skos", "http://www.w3.org/2004/02/skos/core#"),
    ("sssom", "https://w3id.org/sssom/"),
    ("xsd", "http://www.w3.org/2001/XMLSchema#"),
];

/// Namespace of a source's entities.
pub fn source_namespace(source: &str) -> String {
    format!("https://voparis-ns.obspm.fr/rdf/obsfacilities/{source}#")
}

fn literal(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn float(v: f64) -> String {
    format!("\"{v}\"^^xsd:float")
}

/// Renders records in date-then-id order. Records breaking their
/// invariants are refused.
pub fn emit_sssom(records: &[MappingRecord]) -> Result<String, RecordError> {
    let mut records = records.to_vec();
    sort_records(&mut records);
    for r in &records {
        r.check()?;
    }
    let sources: BTreeSet<String> = records
        .iter()
        .flat_map(|r| [r.subject_id.source().to_string(), r.object_id.source().to_string()])
        .collect();
    let mut out = String::new();
    let mut prefixes: Vec<(String, String)> = FIXED_PREFIXES.iter().map(|(p, u)| (p.to_string(), u.to_string())).collect();
    prefixes.extend(sources.iter().map(|s| (s.clone(), source_namespace(s))));
    prefixes.sort();
    for (prefix, uri) in prefixes {
        let _ = writeln!(out, "@prefix {prefix}: <{uri}> .");
    }
    for r in &records {
        out.push('\n');
        let mut lines: Vec<String> = Vec::new();
        if let Some(comment) = &r.comment {
            lines.push(format!("rdfs:comment {}", literal(comment)));
        }
        for (field, value) in &r.scores {
            lines.push(format!("obsf:{field} {}", float(*value)));
        }
        if let Some(j) = &r.justification {
            lines.push(format!("sssom:justification {j}"));
        }
        lines.push(format!(
            "sssom:mapping_date \"{}\"^^xsd:dateTimeStamp",
            format_timestamp(&r.mapping_date)
        ));
        lines.push(format!("sssom:mapping_tool {}", literal(&r.mapping_tool)));
        lines.push(format!("sssom:object_id {}", r.object_id));
        lines.push(format!("sssom:predicate_id {}", r.predicate_id));
        if let Some(reviewer) = &r.reviewer_label {
            lines.push(format!("sssom:reviewer_label {}", literal(reviewer)));
        }
        lines.push(format!("sssom:similarity_measure {}", literal(r.similarity_measure.as_str())));
        lines.push(format!("sssom:similarity_score {}", float(r.similarity_score)));
        lines.push(format!("sssom:subject_id {}", r.subject_id));
        let _ = writeln!(out, "obsf:{} a sssom:Mapping ;", r.id);
        let last = lines.len() - 1;
        for (i, line) in lines.iter().enumerate() {
            let _ = writeln!(out, "    {line} {}", if i == last { '.' } else { ';' });
        }
    }
    Ok(out)
}

pub const TSV_COLUMNS: [&str; 11] = [
    "subject_id",
    "predicate_id",
    "object_id",
    "mapping_justification",
    "mapping_date",
    "mapping_tool",
    "reviewer_label",
    "similarity_measure",
    "similarity_score",
    "comment",
    "other",
];

/// SSSOM table form with a `curie_map` metadata header. Per-score values
/// go to `other` as `name=value` joined by `|`.
pub fn emit_sssom_tsv(records: &[MappingRecord]) -> Result<String, RecordError> {
    let mut records = records.to_vec();
    sort_records(&mut records);
    let sources: BTreeSet<String> = records
        .iter()
        .flat_map(|r| [r.subject_id.source().to_string(), r.object_id.source().to_string()])
        .collect();
    let mut out = String::from("#curie_map:\n");
    let mut prefixes: Vec<(String, String)> = FIXED_PREFIXES.iter().map(|(p, u)| (p.to_string(), u.to_string())).collect();
    prefixes.extend(sources.iter().map(|s| (s.clone(), source_namespace(s))));
    prefixes.sort();
    for (p, u) in prefixes {
        let _ = writeln!(out, "#  {p}: \"{u}\"");
    }
    let mut writer = csv::WriterBuilder::new().delimiter(b'\t').from_writer(Vec::new());
    let to_err = |_| RecordError {
        id: uuid::Uuid::nil(),
        violation: "tsv serialization failed",
    };
    writer.write_record(TSV_COLUMNS).map_err(to_err)?;
    for r in &records {
        r.check()?;
        let justification = match (&r.justification, r.similarity_measure) {
            (Some(j), _) => j.clone(),
            (None, SimilarityMeasure::ExternalId) => "semapv:UnspecifiedMatching".to_owned(),
            (None, _) => LEXICAL_MATCHING.to_owned(),
        };
        let other: Vec<String> = r.scores.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writer
            .write_record([
                r.subject_id.to_string(),
                r.predicate_id.clone(),
                r.object_id.to_string(),
                justification,
                format_timestamp(&r.mapping_date),
                r.mapping_tool.clone(),
                r.reviewer_label.clone().unwrap_or_default(),
                r.similarity_measure.to_string(),
                r.similarity_score.to_string(),
                r.comment.clone().unwrap_or_default().replace(['\n', '\t'], " "),
                other.join("|"),
            ])
            .map_err(to_err)?;
    }
    let body = writer.into_inner().map_err(|_| RecordError {
        id: uuid::Uuid::nil(),
        violation: "tsv serialization failed",
    })?;
    out.push_str(&String::from_utf8(body).expect("csv writes utf-8"));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clock::parse_timestamp;

    #[test]
    fn label_match_block() {
        let r = MappingRecord::label_match(
            "pds:observatorio-del-teide".parse().unwrap(),
            "aas:observatorio-del-teide".parse().unwrap(),
            parse_timestamp("2025-07-23T11:12:18.890248").unwrap(),
            "FacilityList/merge.py",
        );
        let doc = emit_sssom(&[r.clone()]).unwrap();
        let block = doc.split("\n\n").nth(1).unwrap();
        let expected = format!(
            "obsf:{} a sssom:Mapping ;
    obsf:label_match \"1\"^^xsd:float ;
    sssom:mapping_date \"2025-07-23T11:12:18.890248\"^^xsd:dateTimeStamp ;
    sssom:mapping_tool \"FacilityList/merge.py\" ;
    sssom:object_id aas:observatorio-del-teide ;
    sssom:predicate_id skos:exactMatch ;
    sssom:similarity_measure \"label_match\" ;
    sssom:similarity_score \"1\"^^xsd:float ;
    sssom:subject_id pds:observatorio-del-teide .
",
            r.id
        );
        assert_eq!(block, expected);
        assert!(doc.contains("@prefix aas: <https://voparis-ns.obspm.fr/rdf/obsfacilities/aas#> ."));
    }

    #[test]
    fn empty_document_is_header_only() {
        let doc = emit_sssom(&[]).unwrap();
        assert_eq!(doc.lines().count(), 6);
        assert!(doc.lines().all(|l| l.starts_with("@prefix")));
    }

    #[test]
    fn invariant_violations_refused() {
        let mut r = MappingRecord::label_match(
            "pds:a".parse().unwrap(),
            "aas:b".parse().unwrap(),
            parse_timestamp("2025-01-01T00:00:00").unwrap(),
            "t",
        );
        r.reviewer_label = Some("someone".into());
        assert!(emit_sssom(&[r]).is_err());
    }

    #[test]
    fn comment_escaping() {
        assert_eq!(literal("a \"b\"\nc"), "\"a \\\"b\\\"\\nc\"");
    }

    #[test]
    fn tsv_shape() {
        let r = MappingRecord::label_match(
            "pds:a".parse().unwrap(),
            "aas:b".parse().unwrap(),
            parse_timestamp("2025-01-01T00:00:00").unwrap(),
            "t",
        );
        let tsv = emit_sssom_tsv(&[r]).unwrap();
        let rows: Vec<&str> = tsv.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(rows[0].split('\t').count(), TSV_COLUMNS.len());
        assert!(rows[1].starts_with("pds:a\tskos:exactMatch\taas:b\tsemapv:LexicalMatching"));
    }
}
