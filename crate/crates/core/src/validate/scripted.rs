//! Deterministic validators for replays and simulations.

use std::collections::{HashMap, VecDeque};

use super::{Deferral, PairView, Validator, Verdict, VerdictDecision};
use crate::model::EntityId;

/// Returns pre-recorded decisions in call order; defers once exhausted.
#[derive(Debug, Clone)]
pub struct ScriptedValidator {
    script: VecDeque<VerdictDecision>,
    calls: usize,
}

impl ScriptedValidator {
    pub fn new(script: impl IntoIterator<Item = VerdictDecision>) -> Self {
        Self {
            script: script.into_iter().collect(),
            calls: 0,
        }
    }

    pub fn calls(&self) -> usize {
        self.calls
    }
}

impl Validator for ScriptedValidator {
    fn reviewer_label(&self) -> &str {
        "scripted-validator"
    }

    fn validate(&mut self, _: PairView<'_>) -> Result<Verdict, Deferral> {
        self.calls += 1;
        let decision = self.script.pop_front().ok_or_else(|| Deferral {
            reason: "script exhausted".into(),
            transport: false,
        })?;
        Ok(Verdict {
            decision,
            justification: format!("scripted verdict #{}", self.calls),
            reviewer_label: "scripted-validator".into(),
        })
    }
}

/// Answers from a ground-truth table keyed by unordered id pairs; pairs
/// missing from the table are judged Distinct.
#[derive(Debug, Clone, Default)]
pub struct ReplayValidator {
    truth: HashMap<(EntityId, EntityId), VerdictDecision>,
    calls: usize,
}

impl ReplayValidator {
    pub fn new(truth: impl IntoIterator<Item = (EntityId, EntityId, VerdictDecision)>) -> Self {
        Self {
            truth: truth.into_iter().map(|(a, b, d)| (Self::key(a, b), d)).collect(),
            calls: 0,
        }
    }

    fn key(a: EntityId, b: EntityId) -> (EntityId, EntityId) {
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }

    pub fn calls(&self) -> usize {
        self.calls
    }
}

impl Validator for ReplayValidator {
    fn reviewer_label(&self) -> &str {
        "ground-truth-replay"
    }

    fn validate(&mut self, view: PairView<'_>) -> Result<Verdict, Deferral> {
        self.calls += 1;
        let key = Self::key(view.left.id.clone(), view.right.id.clone());
        let (decision, justification) = match self.truth.get(&key) {
            Some(d) => (*d, "annotated ground truth".to_owned()),
            None => (VerdictDecision::Distinct, "not annotated as a match".to_owned()),
        };
        Ok(Verdict {
            decision,
            justification,
            reviewer_label: "ground-truth-replay".into(),
        })
    }
}
