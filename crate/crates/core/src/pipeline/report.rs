//! Machine-readable run report.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::diagnostics::{count_level, Diagnostic, Level};
use crate::validate::LoopStats;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LineStatus {
    Ok,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LineReport {
    pub line_no: usize,
    pub line: String,
    pub status: LineStatus,
    pub error: Option<String>,
    pub left_entities: usize,
    pub right_entities: usize,
    pub external_id_matches: usize,
    pub candidate_pairs: usize,
    pub auto_accepted: usize,
    pub filtered: usize,
    pub scored: usize,
    pub validation: LoopStats,
    pub records: usize,
    pub wall_time_ms: f64,
}

impl LineReport {
    pub fn new(line_no: usize, line: String) -> Self {
        Self {
            line_no,
            line,
            status: LineStatus::Ok,
            error: None,
            left_entities: 0,
            right_entities: 0,
            external_id_matches: 0,
            candidate_pairs: 0,
            auto_accepted: 0,
            filtered: 0,
            scored: 0,
            validation: LoopStats::default(),
            records: 0,
            wall_time_ms: 0.0,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DiagnosticCounts {
    pub info: usize,
    pub warning: usize,
    pub error: usize,
}

impl DiagnosticCounts {
    pub fn of(diagnostics: &[Diagnostic]) -> Self {
        Self {
            info: count_level(diagnostics, Level::Info),
            warning: count_level(diagnostics, Level::Warning),
            error: count_level(diagnostics, Level::Error),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RunReport {
    pub mapping_tool: String,
    /// Entities loaded per source.
    pub sources: BTreeMap<String, usize>,
    pub entities: usize,
    pub synonym_sets: usize,
    /// Sets with more than one member.
    pub merged_sets: usize,
    pub records: usize,
    pub validator_calls: usize,
    pub accepted: usize,
    pub rejected: usize,
    pub deferred: usize,
    pub lines_stopped_by_streak: usize,
    pub failed_lines: usize,
    pub lines: Vec<LineReport>,
    pub diagnostics: DiagnosticCounts,
    pub wall_time_ms: f64,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
