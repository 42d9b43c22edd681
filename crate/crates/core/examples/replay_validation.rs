//! Replays the annotated 30-pair fixture through the validation loop with
//! a ground-truth validator, then with the offline rule validator.
//!
//!     cargo run --example replay_validation [-- threshold]

use facmatch::clock::FixedClock;
use facmatch::model::{EntityRef, SetRegistry};
use facmatch::profile::build_profiles;
use facmatch::scoring::{global_score, Encoders, PairScorer, ScoreKind, ScoreWeights};
use facmatch::validate::{
    labeled_candidates, read_labeled_pairs, run_validation_loop, ReplayValidator, RuleValidator, ValidationConfig,
    Validator,
};

fn main() {
    let threshold: f64 = std::env::args().nth(1).and_then(|t| t.parse().ok()).unwrap_or(0.5);
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/validation/aas_pds_30.jsonl");
    let file = std::fs::File::open(path).expect("fixture");
    let labeled = read_labeled_pairs(std::io::BufReader::new(file)).expect("fixture parses");
    let (catalog, candidates, truth) = labeled_candidates(&labeled).expect("consistent ids");

    let validators: Vec<(&str, Box<dyn Validator>)> = vec![
        ("ground truth", Box::new(ReplayValidator::new(truth))),
        ("rule", Box::new(RuleValidator::new(threshold))),
    ];
    for (name, mut validator) in validators {
        let mut registry = SetRegistry::new(&catalog);
        let profiles = build_profiles(&catalog, &registry);
        let corpus: Vec<EntityRef> = catalog.iter().map(|(r, _)| r).collect();
        let kinds = [ScoreKind::Levenshtein, ScoreKind::Tfidf, ScoreKind::Digits];
        let (scorer, _) = PairScorer::prepare(&kinds, &profiles, &corpus, &Encoders::default());
        let mut pairs = candidates.clone();
        for p in &mut pairs {
            p.scores = scorer.score(p.left, p.right);
            p.global_score = global_score(&p.scores, &ScoreWeights::default());
        }
        let clock = FixedClock::parse("2025-07-23T11:12:18.890248").unwrap();
        let out = run_validation_loop(
            &catalog,
            &mut pairs,
            validator.as_mut(),
            &ValidationConfig::default(),
            &mut registry,
            &clock,
            "facmatch/example",
        );
        let s = &out.stats;
        println!(
            "{name:>12}: {} calls, {} accepted, {} rejected, longest rejection streak {}",
            s.validator_calls, s.accepted, s.rejected, s.longest_rejection_streak
        );
        if name == "rule" {
            let correct = labeled
                .iter()
                .filter(|p| {
                    let merged = registry.same_set(
                        catalog.lookup(&p.left.id).unwrap(),
                        catalog.lookup(&p.right.id).unwrap(),
                    );
                    merged == (p.label == facmatch::validate::VerdictDecision::Same)
                })
                .count();
            println!("{:>12}  {correct}/30 decisions agree with the annotation at threshold {threshold}", "");
        }
    }
}
