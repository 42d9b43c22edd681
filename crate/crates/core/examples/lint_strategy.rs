//! Parses a mapping-strategy file and prints its lines and lint findings.
//!
//!     cargo run --example lint_strategy [-- path/to/file.strategy]

use facmatch::model::SourceId;
use facmatch::strategy::validate_strategy;
use facmatch::Strategy;

fn main() {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/strategy/appendix-e.strategy").to_owned());
    let text = std::fs::read_to_string(&path).expect("readable strategy file");
    let strategy = match Strategy::parse(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{path}: {e}");
            std::process::exit(1);
        }
    };
    for line in &strategy.lines {
        let filter = line.type_filter.as_ref().map(|f| format!(" [{f}]")).unwrap_or_default();
        println!("line {}: {} x {}{filter}", line.line_no, line.source_a, line.source_b);
        println!("    criteria: {:?}", line.criteria().iter().map(|c| c.as_str()).collect::<Vec<_>>());
        println!("    scores:   {:?}", line.scores().iter().map(|s| s.as_str()).collect::<Vec<_>>());
    }
    let findings = validate_strategy(&strategy, &SourceId::defaults());
    if findings.is_empty() {
        println!("no lint findings");
    }
    for d in findings {
        println!("{d}");
    }
}
