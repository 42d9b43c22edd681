//! Mapping-strategy files.
//!
//! ```text
//! # comment
//! iaumpc, wikidata[all,-spacecraft]: label_match, identifier, distance, type, levenshtein, tfidf
//! pds, aas: distance, type, date, aperture, label_match, levenshtein, tfidf, digit
//! ```
//!
//! Each line names two sources, an optional class filter applied to both
//! sides, and the ordered steps run on their candidate pairs. Criteria run
//! in order before any score; see [`crate::pipeline`].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::diagnostics::Diagnostic;
use crate::matcher::Criterion;
use crate::model::{FacilityClass, SourceId};
use crate::scoring::ScoreKind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct StrategyError {
    pub line: usize,
    pub kind: StrategyErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrategyErrorKind {
    #[error("expected `source, source[filters]: steps`, {0}")]
    Syntax(String),
    #[error("unknown source {0:?}")]
    UnknownSource(String),
    #[error("unknown step {0:?}")]
    UnknownStep(String),
    #[error("unknown class {0:?} in filter")]
    UnknownClass(String),
    #[error("empty step list")]
    EmptySteps,
    #[error("malformed filter brackets")]
    MalformedBracket,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Step {
    Criterion(Criterion),
    Score(ScoreKind),
}

impl Step {
    pub fn as_str(self) -> &'static str {
        match self {
            Step::Criterion(c) => c.as_str(),
            Step::Score(s) => s.as_str(),
        }
    }

    /// Canonical step names accepted in strategy files.
    pub fn registry() -> Vec<Step> {
        Criterion::ALL
            .into_iter()
            .map(Step::Criterion)
            .chain(ScoreKind::ALL.into_iter().map(Step::Score))
            .collect()
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Step {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse::<Criterion>()
            .map(Step::Criterion)
            .or_else(|_| s.parse::<ScoreKind>().map(Step::Score))
            .map_err(|_| format!("unknown step {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FilterToken {
    All,
    Include(FacilityClass),
    Exclude(FacilityClass),
}

impl fmt::Display for FilterToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilterToken::All => f.write_str("all"),
            FilterToken::Include(c) => f.write_str(c.as_str()),
            FilterToken::Exclude(c) => write!(f, "-{}", c.as_str()),
        }
    }
}

/// Class filter such as `[all,-spacecraft]`. Untyped entities always pass.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TypeFilter {
    tokens: Vec<FilterToken>,
}

impl TypeFilter {
    pub fn new(tokens: Vec<FilterToken>) -> Self {
        Self { tokens }
    }

    pub fn tokens(&self) -> &[FilterToken] {
        &self.tokens
    }

    /// Known classes admitted: tokens apply left to right, starting from
    /// every class when the first token is a negation.
    pub fn included(&self) -> Vec<FacilityClass> {
        let mut set: Vec<FacilityClass> = match self.tokens.first() {
            Some(FilterToken::Exclude(_)) => FacilityClass::KNOWN.to_vec(),
            _ => Vec::new(),
        };
        for token in &self.tokens {
            match *token {
                FilterToken::All => set = FacilityClass::KNOWN.to_vec(),
                FilterToken::Include(c) if !set.contains(&c) => set.push(c),
                FilterToken::Include(_) => {}
                FilterToken::Exclude(c) => set.retain(|x| *x != c),
            }
        }
        set.sort_by_key(|c| FacilityClass::KNOWN.iter().position(|k| k == c));
        set
    }

    pub fn admits(&self, class: FacilityClass) -> bool {
        !class.is_known() || self.included().contains(&class)
    }
}

impl fmt::Display for TypeFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.tokens.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for TypeFilter {
    type Err = StrategyErrorKind;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut tokens = Vec::new();
        for raw in s.split(',') {
            let raw = raw.trim();
            if raw.is_empty() {
                return Err(StrategyErrorKind::MalformedBracket);
            }
            let token = if raw.eq_ignore_ascii_case("all") {
                FilterToken::All
            } else if let Some(rest) = raw.strip_prefix('-') {
                FilterToken::Exclude(parse_class(rest.trim())?)
            } else {
                FilterToken::Include(parse_class(raw)?)
            };
            tokens.push(token);
        }
        Ok(Self { tokens })
    }
}

fn parse_class(s: &str) -> Result<FacilityClass, StrategyErrorKind> {
    s.parse::<FacilityClass>()
        .ok()
        .filter(|c| c.is_known())
        .ok_or_else(|| StrategyErrorKind::UnknownClass(s.to_owned()))
}

#[derive(Debug, Clone, Eq)]
pub struct StrategyLine {
    pub source_a: SourceId,
    pub source_b: SourceId,
    pub type_filter: Option<TypeFilter>,
    pub steps: Vec<Step>,
    /// 1-based position in the parsed text; 0 for lines built in code.
    pub line_no: usize,
}

impl PartialEq for StrategyLine {
    fn eq(&self, other: &Self) -> bool {
        self.source_a == other.source_a
            && self.source_b == other.source_b
            && self.type_filter == other.type_filter
            && self.steps == other.steps
    }
}

impl StrategyLine {
    pub fn criteria(&self) -> Vec<Criterion> {
        self.steps
            .iter()
            .filter_map(|s| match s {
                Step::Criterion(c) => Some(*c),
                Step::Score(_) => None,
            })
            .collect()
    }

    pub fn scores(&self) -> Vec<ScoreKind> {
        self.steps
            .iter()
            .filter_map(|s| match s {
                Step::Score(k) => Some(*k),
                Step::Criterion(_) => None,
            })
            .collect()
    }

    pub fn parse(text: &str, line_no: usize) -> Result<Self, StrategyError> {
        let err = |kind| StrategyError { line: line_no, kind };
        let (head, tail) = text
            .split_once(':')
            .ok_or_else(|| err(StrategyErrorKind::Syntax("missing `:`".into())))?;
        let (sources, type_filter) = match head.find('[') {
            Some(open) => {
                let close = head.rfind(']').ok_or_else(|| err(StrategyErrorKind::MalformedBracket))?;
                if close < open || !head[close + 1..].trim().is_empty() || head[open + 1..close].contains(['[', ']']) {
                    return Err(err(StrategyErrorKind::MalformedBracket));
                }
                let filter = head[open + 1..close].parse::<TypeFilter>().map_err(err)?;
                (&head[..open], Some(filter))
            }
            None if head.contains(']') => return Err(err(StrategyErrorKind::MalformedBracket)),
            None => (head, None),
        };
        let names: Vec<&str> = sources.split(',').map(str::trim).collect();
        let [a, b] = names.as_slice() else {
            return Err(err(StrategyErrorKind::Syntax(format!("expected two sources, found {}", names.len()))));
        };
        let source = |s: &str| SourceId::new(s).map_err(|_| err(StrategyErrorKind::UnknownSource(s.to_owned())));
        let (source_a, source_b) = (source(a)?, source(b)?);
        let mut steps = Vec::new();
        if !tail.trim().is_empty() {
            for raw in tail.split(',') {
                let raw = raw.trim();
                if raw.is_empty() {
                    return Err(err(StrategyErrorKind::Syntax("empty step name".into())));
                }
                steps.push(raw.parse::<Step>().map_err(|_| err(StrategyErrorKind::UnknownStep(raw.to_owned())))?);
            }
        }
        if steps.is_empty() {
            return Err(err(StrategyErrorKind::EmptySteps));
        }
        Ok(Self {
            source_a,
            source_b,
            type_filter,
            steps,
            line_no,
        })
    }
}

impl fmt::Display for StrategyLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}, {}", self.source_a, self.source_b)?;
        if let Some(filter) = &self.type_filter {
            write!(f, "[{filter}]")?;
        }
        let steps: Vec<&str> = self.steps.iter().map(|s| s.as_str()).collect();
        write!(f, ": {}", steps.join(", "))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Strategy {
    pub lines: Vec<StrategyLine>,
}

impl Strategy {
    /// Parses every non-blank, non-`#` line. Source names are checked for
    /// shape only; see [`Strategy::parse_checked`].
    pub fn parse(text: &str) -> Result<Self, StrategyError> {
        let mut lines = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            lines.push(StrategyLine::parse(trimmed, i + 1)?);
        }
        Ok(Self { lines })
    }

    /// [`Strategy::parse`], then rejects sources outside `known`.
    pub fn parse_checked(text: &str, known: &[SourceId]) -> Result<Self, StrategyError> {
        let strategy = Self::parse(text)?;
        for line in &strategy.lines {
            for s in [&line.source_a, &line.source_b] {
                if !known.contains(s) {
                    return Err(StrategyError {
                        line: line.line_no,
                        kind: StrategyErrorKind::UnknownSource(s.to_string()),
                    });
                }
            }
        }
        Ok(strategy)
    }

    /// One line per strategy line, newline-terminated.
    pub fn render(&self) -> String {
        self.lines.iter().map(|l| format!("{l}\n")).collect()
    }

    pub fn sources(&self) -> Vec<SourceId> {
        let mut out: Vec<SourceId> = self
            .lines
            .iter()
            .flat_map(|l| [l.source_a.clone(), l.source_b.clone()])
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

impl FromStr for Strategy {
    type Err = StrategyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

/// Lints a parsed strategy: unknown sources are errors; repeated source
/// pairs, self-pairs, repeated steps and criteria placed after a score are
/// warnings.
pub fn validate_strategy(strategy: &Strategy, known_sources: &[SourceId]) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut seen: BTreeMap<(SourceId, SourceId, String), usize> = BTreeMap::new();
    for line in &strategy.lines {
        let n = line.line_no;
        for s in [&line.source_a, &line.source_b] {
            if !known_sources.contains(s) {
                out.push(Diagnostic::error("strategy.unknown_source", format!("line {n}: unknown source {s:?}")));
            }
        }
        if line.source_a == line.source_b {
            out.push(Diagnostic::warning(
                "strategy.self_pair",
                format!("line {n}: source {} is paired with itself", line.source_a),
            ));
        }
        let (lo, hi) = if line.source_a <= line.source_b {
            (&line.source_a, &line.source_b)
        } else {
            (&line.source_b, &line.source_a)
        };
        let filter = line.type_filter.as_ref().map(ToString::to_string).unwrap_or_default();
        if let Some(first) = seen.insert((lo.clone(), hi.clone(), filter), n) {
            out.push(Diagnostic::warning(
                "strategy.duplicate_pair",
                format!("line {n}: same sources and filter as line {first}"),
            ));
        }
        let mut steps_seen = Vec::new();
        for step in &line.steps {
            if steps_seen.contains(step) {
                out.push(Diagnostic::warning("strategy.duplicate_step", format!("line {n}: step {step} repeated")));
            }
            steps_seen.push(*step);
        }
        if let Some(first_score) = line.steps.iter().position(|s| matches!(s, Step::Score(_))) {
            for step in &line.steps[first_score..] {
                if let Step::Criterion(c) = step {
                    out.push(Diagnostic::warning(
                        "strategy.criterion_after_score",
                        format!("line {n}: criterion {c} follows a score; criteria always run before scoring"),
                    ));
                }
            }
        }
    }
    out
}
