//! Runs every filtering criterion on fixture pairs and shows why each pair
//! is kept, accepted or dropped.
//!
//!     cargo run --example filter_criteria

use facmatch::ingest::load_snapshot_file;
use facmatch::matcher::{evaluate_criterion, geodesic_km, Criterion, Side};
use facmatch::model::Catalog;
use facmatch::profile::EntityProfile;

const PAIRS: &[(&str, &str)] = &[
    (
        "pds:1.52-m-spectrographic-cassegrain-coude-reflector",
        "aas:european-southern-observatory-1.52m-telescope-at-la-silla-observatory",
    ),
    ("pds:3.6-m-equatorial-cassegrain-coude-reflector", "aas:european-southern-observatory-1.52m-telescope-at-la-silla-observatory"),
    ("pds:observatorio-del-teide", "aas:observatorio-del-teide"),
];

fn main() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/catalog");
    let mut entities = Vec::new();
    for source in ["pds", "aas"] {
        entities.extend(load_snapshot_file(format!("{dir}/{source}.jsonl").as_ref()).expect("fixture loads").records);
    }
    let catalog = Catalog::from_entities(entities).expect("unique ids");
    for (l, r) in PAIRS {
        let (a, b) = (
            catalog.entity(&l.parse().unwrap()).expect("left in fixture"),
            catalog.entity(&r.parse().unwrap()).expect("right in fixture"),
        );
        let (pa, pb) = (EntityProfile::of(a), EntityProfile::of(b));
        println!("{} / {}", a.pref_label, b.pref_label);
        if let (Some(la), Some(lo), Some(lb), Some(lob)) = (a.latitude, a.longitude, b.latitude, b.longitude) {
            println!("    distance {:.3} km", geodesic_km(la, lo, lb, lob));
        }
        for c in Criterion::ALL {
            let d = evaluate_criterion(c, Side { entity: a, profile: &pa }, Side { entity: b, profile: &pb });
            println!("    {:<12} {d:?}", c.as_str());
        }
    }
}
