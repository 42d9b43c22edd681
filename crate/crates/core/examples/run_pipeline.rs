//! Runs the seven-line fixture strategy end to end and writes every output.
//!
//!     cargo run --example run_pipeline [-- output-dir]

use facmatch::{Pipeline, RunConfig};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let config_path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/config/appendix-e.toml");
    let mut config = RunConfig::load(config_path.as_ref()).expect("fixture config");
    if let Some(dir) = std::env::args().nth(1) {
        config.output_dir = dir.into();
    }
    let mut pipeline = Pipeline::new(config).unwrap_or_else(|e| {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    });
    let outcome = pipeline.run().unwrap_or_else(|e| {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    });
    println!("{:<4} {:<34} {:>6} {:>6} {:>6} {:>6} {:>6}", "line", "sources", "pairs", "auto", "filt", "calls", "acc");
    for l in &outcome.report.lines {
        let v = &l.validation;
        println!(
            "{:<4} {:<34} {:>6} {:>6} {:>6} {:>6} {:>6}{}",
            l.line_no,
            l.line.split(':').next().unwrap_or_default(),
            l.candidate_pairs,
            l.auto_accepted + l.external_id_matches,
            l.filtered,
            v.validator_calls,
            v.accepted,
            if v.stopped_by_streak { "  (stopped by streak)" } else { "" }
        );
    }
    let config = pipeline.config();
    for path in outcome.write(&config.output_dir, &config.outputs).expect("outputs written") {
        println!("wrote {}", path.display());
    }
}
