//! Ranked, one-pair-at-a-time validation of scored candidates.

pub mod labeled;
pub mod llm;
pub mod prompt;
pub mod rule;
pub mod run;
pub mod scripted;

use serde::{Deserialize, Serialize};

use crate::matcher::CandidatePair;
use crate::model::Entity;

pub use labeled::{labeled_candidates, read_labeled_pairs, LabeledPair};
pub use llm::{parse_reply, ChatTransport, HttpChatTransport, LlmConfig, LlmValidator, TransportError};
pub use prompt::build_prompt;
pub use rule::{RuleValidator, RULE_REVIEWER};
pub use run::{rank_pairs, run_validation_loop, LoopOutcome, LoopStats};
pub use scripted::{ReplayValidator, ScriptedValidator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictDecision {
    Same,
    Distinct,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub decision: VerdictDecision,
    pub justification: String,
    pub reviewer_label: String,
}

/// A validator could not decide; the pair stays pending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deferral {
    pub reason: String,
    /// The validator's transport failed, as opposed to an unusable answer.
    pub transport: bool,
}

impl Deferral {
    pub fn transport(error: impl std::fmt::Display) -> Self {
        Self {
            reason: error.to_string(),
            transport: true,
        }
    }
}

/// What a validator sees of a pair.
#[derive(Debug, Clone, Copy)]
pub struct PairView<'a> {
    pub left: &'a Entity,
    pub right: &'a Entity,
    pub pair: &'a CandidatePair,
}

pub trait Validator {
    /// Recorded as the reviewer of accepted mappings.
    fn reviewer_label(&self) -> &str;
    fn validate(&mut self, view: PairView<'_>) -> Result<Verdict, Deferral>;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ValidationConfig {
    /// Consecutive Distinct verdicts after which the loop stops (K).
    pub stop_after_consecutive_rejections: usize,
    pub rule_threshold: f64,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        Self {
            stop_after_consecutive_rejections: 20,
            rule_threshold: 0.85,
        }
    }
}

impl ValidationConfig {
    pub fn check(&self) -> Result<(), String> {
        if self.stop_after_consecutive_rejections == 0 {
            return Err("stop_after_consecutive_rejections must be at least 1".into());
        }
        if !self.rule_threshold.is_finite() {
            return Err("rule_threshold must be finite".into());
        }
        Ok(())
    }
}
