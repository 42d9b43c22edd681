//! Builds both mapping-record shapes by hand and prints them as SSSOM
//! Turtle-style text and as SSSOM TSV.
//!
//!     cargo run --example emit_sssom

use std::collections::BTreeMap;

use facmatch::clock::parse_timestamp;
use facmatch::emit::{emit_sssom, emit_sssom_tsv, MappingRecord};
use facmatch::scoring::ScoreKind;
use facmatch::validate::{Verdict, VerdictDecision};

fn main() {
    let date = parse_timestamp("2025-07-23T11:12:18.890248").unwrap();
    let label = MappingRecord::label_match(
        "pds:observatorio-del-teide".parse().unwrap(),
        "aas:observatorio-del-teide".parse().unwrap(),
        date,
        "facmatch/example",
    );
    let scores = BTreeMap::from([(ScoreKind::Levenshtein, 0.4444444444444444), (ScoreKind::Tfidf, 0.2926864456169227)]);
    let verdict = Verdict {
        decision: VerdictDecision::Same,
        justification: "same 1.52 m telescope at La Silla; labels differ in convention only".into(),
        reviewer_label: "deepseek-v3:671b-q4_K_M".into(),
    };
    let weighted = MappingRecord::weighted_sum(
        "pds:1.52-m-spectrographic-cassegrain-coude-reflector".parse().unwrap(),
        "aas:european-southern-observatory-1.52m-telescope-at-la-silla-observatory".parse().unwrap(),
        &scores,
        (0.5 * 0.4444444444444444 + 0.2926864456169227) / 1.5,
        &verdict,
        date,
        "facmatch/example",
    );
    let records = [label, weighted];
    print!("{}", emit_sssom(&records).expect("valid records"));
    println!("---");
    print!("{}", emit_sssom_tsv(&records).expect("valid records"));
}
