mod common;

use std::path::Path;

use facmatch::emit::read_ivoa_csv;
use facmatch::ingest::read_records;
use facmatch::pipeline::{LineStatus, PipelineError};
use facmatch::Pipeline;

use common::*;

fn golden(rel: &str, actual: &str) {
    let path = fixture(rel);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap();
    assert!(expected == actual, "{} is out of date; rerun with UPDATE_GOLDEN=1 after checking the diff", path.display());
}

#[test]
fn fixture_run_matches_golden_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let outcome = Pipeline::new(fixture_config(dir.path())).unwrap().run().unwrap();
    golden("resolver/resolver.json", &outcome.outputs.resolver_json);
    golden("resolver/facilities.csv", &outcome.outputs.facilities_csv);

    let r = &outcome.report;
    assert_eq!((r.entities, r.synonym_sets, r.records), (48, 26, 22));
    assert_eq!(r.failed_lines, 0);
    assert_eq!(r.lines.len(), 7);
    assert!(r.lines.iter().all(|l| l.status == LineStatus::Ok));
    // pds/wikidata has many weak candidates and hits the rejection streak
    assert_eq!(r.lines_stopped_by_streak, 1);
    assert!(r.lines[4].validation.stopped_by_streak);
}

#[test]
fn outputs_are_mutually_consistent() {
    let dir = tempfile::tempdir().unwrap();
    let outcome = Pipeline::new(fixture_config(dir.path())).unwrap().run().unwrap();
    let linked = read_records(outcome.outputs.linked_catalog.as_bytes(), None).unwrap();
    assert_eq!(linked.len(), outcome.catalog.len());
    let rows = read_ivoa_csv(outcome.outputs.facilities_csv.as_bytes()).unwrap();
    let dict = facmatch::emit::ResolverDictionary::from_json(&outcome.outputs.resolver_json).unwrap();
    assert_eq!(rows.len(), dict.entries.len());
    for row in &rows {
        assert_eq!(dict.entries[&row.slug][0], row.label, "{}", row.slug);
        for p in &row.parents {
            assert!(dict.entries.contains_key(p), "parent {p} of {}", row.slug);
        }
    }
    // every accepted mapping joins its endpoints
    for rec in &outcome.records {
        let (a, b) = (outcome.catalog.lookup(&rec.subject_id).unwrap(), outcome.catalog.lookup(&rec.object_id).unwrap());
        assert!(outcome.registry.same_set(a, b), "{} / {}", rec.subject_id, rec.object_id);
    }
    let voyager = rows.iter().filter(|r| r.parents.contains(&"voyager".to_owned())).count();
    assert_eq!(voyager, 2);
}

#[test]
fn sssom_records_come_out_sorted_and_stamped_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let outcome = Pipeline::new(fixture_config(dir.path())).unwrap().run().unwrap();
    let mut dates: Vec<_> = outcome.records.iter().map(|r| r.mapping_date).collect();
    let before = dates.clone();
    dates.sort();
    dates.dedup();
    assert_eq!(dates.len(), before.len(), "mapping dates are unique");
    assert!(outcome.outputs.sssom.starts_with("@prefix "));
    assert_eq!(outcome.outputs.sssom.matches(" a sssom:Mapping ;").count(), outcome.records.len());
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn label_match_needs_no_validator() {
    let dir = tempfile::tempdir().unwrap();
    let catalogs = dir.path().join("catalogs");
    std::fs::create_dir(&catalogs).unwrap();
    write(&catalogs, "aas.jsonl", "{\"uri\": \"x\", \"pref_label\": \"Teide\"}\n");
    write(&catalogs, "pds.jsonl", "{\"uri\": \"y\", \"pref_label\": \"Teide\"}\n");
    write(dir.path(), "s.strategy", "pds, aas: label_match, levenshtein\n");
    let config = write(
        dir.path(),
        "run.toml",
        "strategy = \"s.strategy\"\ncatalog_dir = \"catalogs\"\nvalidator = \"llm\"\n\
         [llm]\nbase_url = \"http://127.0.0.1:9\"\nmodel = \"m\"\nretries = 0\ntimeout_secs = 1\n",
    );
    let config = facmatch::RunConfig::load(&config).unwrap();
    // label_match auto-accepts, so the unreachable validator is never called
    let outcome = Pipeline::new(config).unwrap().run().unwrap();
    assert_eq!(outcome.report.merged_sets, 1);
    assert_eq!(outcome.report.validator_calls, 0);
}

#[test]
fn unreachable_validator_is_a_transport_error() {
    let dir = tempfile::tempdir().unwrap();
    let catalogs = dir.path().join("catalogs");
    std::fs::create_dir(&catalogs).unwrap();
    write(&catalogs, "aas.jsonl", "{\"uri\": \"x\", \"pref_label\": \"Teide Observatory\"}\n");
    write(&catalogs, "pds.jsonl", "{\"uri\": \"y\", \"pref_label\": \"Observatorio del Teide\"}\n");
    write(dir.path(), "s.strategy", "pds, aas: label_match, levenshtein\n");
    let config = write(
        dir.path(),
        "run.toml",
        "strategy = \"s.strategy\"\ncatalog_dir = \"catalogs\"\nvalidator = \"llm\"\n\
         [llm]\nbase_url = \"http://127.0.0.1:9\"\nmodel = \"m\"\nretries = 0\ntimeout_secs = 1\n",
    );
    let config = facmatch::RunConfig::load(&config).unwrap();
    let err = Pipeline::new(config.clone()).unwrap().run().unwrap_err();
    assert_eq!(err.exit_code(), 3, "{err}");
    assert!(matches!(err, PipelineError::Line { line_no: 1, .. }));

    let outcome = Pipeline::new(config).unwrap().keep_going(true).run().unwrap();
    assert_eq!(outcome.report.failed_lines, 1);
    assert_eq!(outcome.report.merged_sets, 0);
    assert!(outcome.records.is_empty());
}
