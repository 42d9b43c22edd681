//! Accept/reject filtering criteria.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::geo::geodesic_km;
use crate::model::{Entity, IdScheme};
use crate::profile::EntityProfile;

/// Pairs farther apart than this are rejected by [`Criterion::Distance`].
pub const MAX_DISTANCE_KM: f64 = 4.0;
pub const APERTURE_RELATIVE_TOLERANCE: f64 = 0.005;
pub const APERTURE_ABSOLUTE_TOLERANCE_M: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Accept,
    Reject,
    Neutral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Criterion {
    #[serde(rename = "label_match")]
    LabelMatch,
    #[serde(rename = "identifier")]
    Identifier,
    #[serde(rename = "distance")]
    Distance,
    #[serde(rename = "type")]
    Type,
    #[serde(rename = "date")]
    Date,
    #[serde(rename = "aperture")]
    Aperture,
}

impl Criterion {
    pub const ALL: [Criterion; 6] = [
        Criterion::LabelMatch,
        Criterion::Identifier,
        Criterion::Distance,
        Criterion::Type,
        Criterion::Date,
        Criterion::Aperture,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Criterion::LabelMatch => "label_match",
            Criterion::Identifier => "identifier",
            Criterion::Distance => "distance",
            Criterion::Type => "type",
            Criterion::Date => "date",
            Criterion::Aperture => "aperture",
        }
    }

    /// `label_match` can only accept; every other criterion can only reject.
    pub fn accepts(self) -> bool {
        self == Criterion::LabelMatch
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Criterion {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "label_match" => Criterion::LabelMatch,
            "identifier" | "identifier_mismatch" => Criterion::Identifier,
            "distance" | "distance_limit" => Criterion::Distance,
            "type" | "type_mismatch" => Criterion::Type,
            "date" | "date_mismatch" => Criterion::Date,
            "aperture" | "aperture_mismatch" => Criterion::Aperture,
            other => return Err(format!("unknown criterion {other:?}")),
        })
    }
}

/// One side of a pair: the record and its matching profile.
#[derive(Debug, Clone, Copy)]
pub struct Side<'a> {
    pub entity: &'a Entity,
    pub profile: &'a EntityProfile,
}

/// Identifier comparison ignores surrounding whitespace and ASCII case.
pub fn same_identifier(a: &str, b: &str) -> bool {
    a.trim().eq_ignore_ascii_case(b.trim())
}

pub fn apertures_differ(a: f64, b: f64) -> bool {
    let tolerance = (APERTURE_RELATIVE_TOLERANCE * a.abs().max(b.abs())).max(APERTURE_ABSOLUTE_TOLERANCE_M);
    (a - b).abs() > tolerance + 1e-12
}

pub fn evaluate_criterion(criterion: Criterion, left: Side<'_>, right: Side<'_>) -> Decision {
    let (l, r) = (left.entity, right.entity);
    let reject_if = |cond: bool| if cond { Decision::Reject } else { Decision::Neutral };
    match criterion {
        Criterion::LabelMatch => {
            if left.profile.normalized.intersection(&right.profile.normalized).next().is_some() {
                Decision::Accept
            } else {
                Decision::Neutral
            }
        }
        Criterion::Identifier => reject_if(IdScheme::ALL.iter().any(|s| {
            matches!((l.external_ids.get(s), r.external_ids.get(s)), (Some(a), Some(b)) if !same_identifier(a, b))
        })),
        Criterion::Distance => match (l.latitude, l.longitude, r.latitude, r.longitude) {
            (Some(la1), Some(lo1), Some(la2), Some(lo2)) => reject_if(geodesic_km(la1, lo1, la2, lo2) > MAX_DISTANCE_KM),
            _ => Decision::Neutral,
        },
        Criterion::Type => reject_if(l.class.is_known() && r.class.is_known() && l.class != r.class),
        Criterion::Date => reject_if(
            [(l.launch_year, r.launch_year), (l.start_year, r.start_year), (l.end_year, r.end_year)]
                .iter()
                .any(|p| matches!(p, (Some(a), Some(b)) if a != b)),
        ),
        Criterion::Aperture => match (&l.aperture, &r.aperture) {
            (Some(a), Some(b)) => reject_if(apertures_differ(a.meters, b.meters)),
            _ => Decision::Neutral,
        },
    }
}
