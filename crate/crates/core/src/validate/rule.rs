//! Offline validator: a global-score threshold plus label-match precedence.

use super::{Deferral, PairView, Validator, Verdict, VerdictDecision};

pub const RULE_REVIEWER: &str = "rule-validator";

#[derive(Debug, Clone)]
pub struct RuleValidator {
    pub threshold: f64,
}

impl RuleValidator {
    pub fn new(threshold: f64) -> Self {
        Self { threshold }
    }
}

impl Validator for RuleValidator {
    fn reviewer_label(&self) -> &str {
        RULE_REVIEWER
    }

    fn validate(&mut self, view: PairView<'_>) -> Result<Verdict, Deferral> {
        let score = view.pair.global_score.unwrap_or(0.0);
        let (decision, justification) = if view.pair.label_matched() {
            (VerdictDecision::Same, format!("label match (global score {score})"))
        } else if score >= self.threshold {
            (VerdictDecision::Same, format!("global score {score} >= threshold {}", self.threshold))
        } else {
            (VerdictDecision::Distinct, format!("global score {score} < threshold {}", self.threshold))
        };
        Ok(Verdict {
            decision,
            justification,
            reviewer_label: RULE_REVIEWER.to_owned(),
        })
    }
}
