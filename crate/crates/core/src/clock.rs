//! Injectable time source. Emitters never sample the wall clock themselves,
//! so two runs sharing a [`FixedClock`] produce identical outputs.

use std::sync::atomic::{AtomicI64, Ordering};

use chrono::{DateTime, NaiveDateTime, TimeDelta, Timelike, Utc};

pub trait Clock: Send + Sync {
    fn now(&self) -> NaiveDateTime;
}

/// Wall clock in UTC, truncated to microseconds.
#[derive(Debug, Default, Clone, Copy)]
pub struct SystemClock;

impl Clock for SystemClock {
    fn now(&self) -> NaiveDateTime {
        let now = Utc::now().naive_utc();
        let micros = now.nanosecond() / 1_000 * 1_000;
        now.with_nanosecond(micros).unwrap_or(now)
    }
}

/// Deterministic clock: starts at a fixed instant and advances by `step`
/// on every call, so successive mapping dates stay strictly ordered.
#[derive(Debug)]
pub struct FixedClock {
    start: NaiveDateTime,
    step_micros: i64,
    ticks: AtomicI64,
}

impl FixedClock {
    pub fn new(start: NaiveDateTime) -> Self {
        Self::stepping(start, TimeDelta::microseconds(1))
    }

    pub fn stepping(start: NaiveDateTime, step: TimeDelta) -> Self {
        Self {
            start,
            step_micros: step.num_microseconds().unwrap_or(0),
            ticks: AtomicI64::new(0),
        }
    }

    /// Parses `2025-07-23T11:12:18.890248`-style timestamps (an RFC 3339
    /// offset is accepted and converted to UTC).
    pub fn parse(text: &str) -> Option<Self> {
        parse_timestamp(text).map(Self::new)
    }
}

impl Clock for FixedClock {
    fn now(&self) -> NaiveDateTime {
        let tick = self.ticks.fetch_add(1, Ordering::SeqCst);
        self.start + TimeDelta::microseconds(tick * self.step_micros)
    }
}

pub const TIMESTAMP_FORMAT: &str = "%Y-%m-%dT%H:%M:%S%.6f";

pub fn format_timestamp(ts: &NaiveDateTime) -> String {
    ts.format(TIMESTAMP_FORMAT).to_string()
}

pub fn parse_timestamp(text: &str) -> Option<NaiveDateTime> {
    let text = text.trim();
    if let Ok(ts) = NaiveDateTime::parse_from_str(text, "%Y-%m-%dT%H:%M:%S%.f") {
        return Some(ts);
    }
    if let Ok(ts) = DateTime::parse_from_rfc3339(text) {
        return Some(ts.with_timezone(&Utc).naive_utc());
    }
    chrono::NaiveDate::parse_from_str(text, "%Y-%m-%d")
        .ok()
        .and_then(|d| d.and_hms_opt(0, 0, 0))
}
