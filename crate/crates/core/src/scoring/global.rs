//! Weighted global score over the applicable per-pair scores.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::ScoreKind;

#[derive(Debug, Error, PartialEq)]
pub enum WeightsError {
    #[error("weight for {0} must be finite and non-negative")]
    Invalid(ScoreKind),
    #[error("at least one weight must be positive")]
    AllZero,
}

/// Fixed per-score weights; Levenshtein defaults to 0.5, the others to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<ScoreKind, f64>", into = "BTreeMap<ScoreKind, f64>")]
pub struct ScoreWeights {
    weights: BTreeMap<ScoreKind, f64>,
}

impl Default for ScoreWeights {
    fn default() -> Self {
        Self {
            weights: ScoreKind::ALL
                .iter()
                .map(|&k| (k, if k == ScoreKind::Levenshtein { 0.5 } else { 1.0 }))
                .collect(),
        }
    }
}

impl ScoreWeights {
    /// Defaults overridden by `overrides`.
    pub fn new(overrides: BTreeMap<ScoreKind, f64>) -> Result<Self, WeightsError> {
        let mut weights = Self::default().weights;
        weights.extend(overrides);
        for (&k, &w) in &weights {
            if !w.is_finite() || w < 0.0 {
                return Err(WeightsError::Invalid(k));
            }
        }
        if weights.values().all(|w| *w == 0.0) {
            return Err(WeightsError::AllZero);
        }
        Ok(Self { weights })
    }

    pub fn get(&self, kind: ScoreKind) -> f64 {
        self.weights.get(&kind).copied().unwrap_or(0.0)
    }

    /// Same weights multiplied by `factor` (> 0).
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            weights: self.weights.iter().map(|(&k, &w)| (k, w * factor)).collect(),
        }
    }
}

impl TryFrom<BTreeMap<ScoreKind, f64>> for ScoreWeights {
    type Error = WeightsError;
    fn try_from(value: BTreeMap<ScoreKind, f64>) -> Result<Self, Self::Error> {
        Self::new(value)
    }
}

impl From<ScoreWeights> for BTreeMap<ScoreKind, f64> {
    fn from(value: ScoreWeights) -> Self {
        value.weights
    }
}

/// `Σ wᵢsᵢ / Σ wᵢ` over the scores present in `scores` with positive
/// weight; `None` when there are none.
pub fn global_score(scores: &BTreeMap<ScoreKind, f64>, weights: &ScoreWeights) -> Option<f64> {
    let (mut num, mut den) = (0.0, 0.0);
    for (&kind, &s) in scores {
        let w = weights.get(kind);
        if w > 0.0 {
            num += w * s;
            den += w;
        }
    }
    (den > 0.0).then(|| num / den)
}
