//! Label enrichment and snapshot versioning on two small in-memory
//! snapshots of one source.
//!
//!     cargo run --example ingest_versions

use facmatch::clock::parse_timestamp;
use facmatch::ingest::{diff_snapshots, enrich_entity, load_snapshot, parse_label_enrichment, write_records};
use facmatch::model::SourceId;

const OLD: &str = r#"{"uri": "la-silla-1m52", "pref_label": "European Southern Observatory 1.52m telescope at La Silla Observatory"}
{"uri": "cosmos-1221", "pref_label": "COSMOS 1221", "alt_labels": ["1980-090A"]}
{"uri": "old-dish", "pref_label": "Retired 12m Dish"}
"#;

const NEW: &str = r#"{"uri": "la-silla-1m52", "pref_label": "European Southern Observatory 1.52m telescope at La Silla Observatory", "end_year": 2002}
{"uri": "cosmos-1221", "pref_label": "COSMOS 1221", "alt_labels": ["1980-090A"]}
{"uri": "kepler", "pref_label": "Kepler Space Telescope (KST)"}
"#;

fn main() {
    let e = parse_label_enrichment("Kepler Space Telescope (KST)");
    println!("label {:?}, aliases {:?}", e.clean_label, e.alt_labels);

    let source = SourceId::new("aas").unwrap();
    let mut old = load_snapshot(OLD.as_bytes(), source.clone()).expect("old snapshot");
    let mut new = load_snapshot(NEW.as_bytes(), source).expect("new snapshot");
    old.records.iter_mut().chain(new.records.iter_mut()).for_each(enrich_entity);

    let now = parse_timestamp("2025-07-23T11:12:18.890248").unwrap();
    let update = diff_snapshots(&old, &new, now).expect("same source");
    println!("added {:?}", update.delta.added);
    println!("modified {:?}", update.delta.modified);
    println!("deprecated {:?}", update.delta.deprecated);
    println!("--- versioned snapshot");
    write_records(std::io::stdout().lock(), &update.snapshot.records).expect("stdout");
}
