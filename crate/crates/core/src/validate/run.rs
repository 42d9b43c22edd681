//! The validation loop.

use serde::Serialize;

use super::{PairView, ValidationConfig, Validator, VerdictDecision};
use crate::clock::Clock;
use crate::diagnostics::Diagnostic;
use crate::emit::MappingRecord;
use crate::matcher::{CandidatePair, PairStatus};
use crate::model::{Catalog, EntityId, SetRegistry};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LoopStats {
    /// Pending pairs with a global score at the start.
    pub ranked: usize,
    pub validator_calls: usize,
    pub accepted: usize,
    pub rejected: usize,
    pub deferred: usize,
    /// Deferrals caused by transport failures.
    pub transport_failures: usize,
    pub skipped_same_set: usize,
    /// Ranked pairs never reached because the loop stopped.
    pub left_pending: usize,
    pub stopped_by_streak: bool,
    pub longest_rejection_streak: usize,
    /// Pairs judged Distinct whose endpoints nevertheless share a set.
    pub inconsistencies: Vec<(EntityId, EntityId)>,
}

#[derive(Debug, Clone, Default)]
pub struct LoopOutcome {
    pub records: Vec<MappingRecord>,
    pub stats: LoopStats,
    pub diagnostics: Vec<Diagnostic>,
}

/// Indices of scored pending pairs, best global score first, ties by
/// (left id, right id).
pub fn rank_pairs(catalog: &Catalog, pairs: &[CandidatePair]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..pairs.len())
        .filter(|&i| pairs[i].status == PairStatus::Pending && pairs[i].global_score.is_some())
        .collect();
    order.sort_by(|&a, &b| {
        let (pa, pb) = (&pairs[a], &pairs[b]);
        pb.global_score
            .partial_cmp(&pa.global_score)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| catalog.get(pa.left).id.cmp(&catalog.get(pb.left).id))
            .then_with(|| catalog.get(pa.right).id.cmp(&catalog.get(pb.right).id))
    });
    order
}

/// Validates pairs in rank order, merging on Same, until `K` Distinct
/// verdicts arrive in a row.
pub fn run_validation_loop(
    catalog: &Catalog,
    pairs: &mut [CandidatePair],
    validator: &mut dyn Validator,
    config: &ValidationConfig,
    registry: &mut SetRegistry,
    clock: &dyn Clock,
    mapping_tool: &str,
) -> LoopOutcome {
    let order = rank_pairs(catalog, pairs);
    let mut out = LoopOutcome::default();
    out.stats.ranked = order.len();
    let mut streak = 0;
    let mut distinct: Vec<usize> = Vec::new();
    for (position, &i) in order.iter().enumerate() {
        if streak >= config.stop_after_consecutive_rejections {
            out.stats.stopped_by_streak = true;
            out.stats.left_pending = order.len() - position;
            break;
        }
        let pair = &pairs[i];
        if registry.same_set(pair.left, pair.right) {
            out.stats.skipped_same_set += 1;
            continue;
        }
        let view = PairView {
            left: catalog.get(pair.left),
            right: catalog.get(pair.right),
            pair,
        };
        out.stats.validator_calls += 1;
        match validator.validate(view) {
            Ok(verdict) => match verdict.decision {
                VerdictDecision::Same => {
                    let record = MappingRecord::weighted_sum(
                        view.left.id.clone(),
                        view.right.id.clone(),
                        &pair.scores,
                        pair.global_score.unwrap_or(0.0),
                        &verdict,
                        clock.now(),
                        mapping_tool,
                    );
                    registry.merge(pair.left, pair.right);
                    pairs[i].status = PairStatus::Validated;
                    out.records.push(record);
                    out.stats.accepted += 1;
                    streak = 0;
                }
                VerdictDecision::Distinct => {
                    pairs[i].status = PairStatus::Rejected;
                    distinct.push(i);
                    out.stats.rejected += 1;
                    streak += 1;
                    out.stats.longest_rejection_streak = out.stats.longest_rejection_streak.max(streak);
                }
            },
            Err(deferral) => {
                out.stats.deferred += 1;
                if deferral.transport {
                    out.stats.transport_failures += 1;
                }
                out.diagnostics.push(Diagnostic::warning(
                    "validate.deferred",
                    format!("{} / {}: {}", view.left.id, view.right.id, deferral.reason),
                ));
            }
        }
    }
    if !out.stats.stopped_by_streak && streak >= config.stop_after_consecutive_rejections && !order.is_empty() {
        out.stats.stopped_by_streak = true;
    }
    for i in distinct {
        let p = &pairs[i];
        if registry.same_set(p.left, p.right) {
            let (a, b) = (catalog.get(p.left).id.clone(), catalog.get(p.right).id.clone());
            out.diagnostics.push(Diagnostic::error(
                "validate.inconsistent_set",
                format!("{a} and {b} were judged distinct but ended in one synonym set"),
            ));
            out.stats.inconsistencies.push((a, b));
        }
    }
    out
}
