//! Canonical entity model shared by every stage.

mod catalog;
mod meronymy;
mod slug;
mod synonym;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use chrono::NaiveDateTime;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use catalog::{Catalog, EntityRef};
pub use meronymy::{meronym_closure, Closure, Direction, MeronymyGraph};
pub use slug::{slug_base, slugify, SlugError};
pub use synonym::{elect_pref_label, SetRegistry, SourcePriority, SynonymSet};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("invalid source identifier {0:?}: expected lowercase letters, digits or '_'")]
    InvalidSource(String),
    #[error("invalid entity id {0:?}: expected `source:slug`")]
    InvalidEntityId(String),
    #[error("unknown facility class {0:?}")]
    UnknownClass(String),
    #[error("unknown identifier scheme {0:?}")]
    UnknownScheme(String),
    #[error("duplicate entity {0}")]
    DuplicateEntity(EntityId),
    #[error("source {0} listed twice in the priority order")]
    DuplicatePriority(SourceId),
    #[error("entity {id}: {message}")]
    Invariant { id: EntityId, message: String },
}

/// The eight catalogs the default strategy is written against.
pub const DEFAULT_SOURCES: [&str; 8] = [
    "wikidata", "aas", "pds", "iaumpc", "naif", "nssdc", "spase", "imcce",
];

/// Short lowercase name of a catalog, also used as its namespace prefix.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SourceId(String);

impl SourceId {
    pub fn new(name: impl AsRef<str>) -> Result<Self, ModelError> {
        let name = name.as_ref().trim();
        let valid = !name.is_empty()
            && name
                .chars()
                .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_');
        if valid {
            Ok(Self(name.to_owned()))
        } else {
            Err(ModelError::InvalidSource(name.to_owned()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn defaults() -> Vec<SourceId> {
        DEFAULT_SOURCES
            .iter()
            .map(|s| SourceId(s.to_string()))
            .collect()
    }
}

impl TryFrom<String> for SourceId {
    type Error = ModelError;
    fn try_from(value: String) -> Result<Self, Self::Error> {
        Self::new(value)
    }
}

impl From<SourceId> for String {
    fn from(value: SourceId) -> Self {
        value.0
    }
}

impl fmt::Display for SourceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for SourceId {
    type Err = ModelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::new(s)
    }
}

/// Namespaced entity identifier, written `source:slug`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct EntityId {
    source: SourceId,
    slug: String,
}

impl EntityId {
    pub fn new(source: SourceId, slug: impl Into<String>) -> Self {
        Self {
            source,
            slug: slug.into(),
        }
    }

    pub fn source(&self) -> &SourceId {
        &self.source
    }

    pub fn slug(&self) -> &str {
        &self.slug
    }

    /// Parses `source:slug`; a bare slug is resolved against `default_source`.
    pub fn parse_in(text: &str, default_source: Option<&SourceId>) -> Result<Self, ModelError> {
        let text = text.trim();
        match text.split_once(':') {
            Some((src, slug)) if !slug.is_empty() => {
                Ok(Self::new(SourceId::new(src).map_err(|_| ModelError::InvalidEntityId(text.to_owned()))?, slug))
            }
            None if !text.is_empty() => match default_source {
                Some(src) => Ok(Self::new(src.clone(), text)),
                None => Err(ModelError::InvalidEntityId(text.to_owned())),
            },
            _ => Err(ModelError::InvalidEntityId(text.to_owned())),
        }
    }
}

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.source, self.slug)
    }
}

impl FromStr for EntityId {
    type Err = ModelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_in(s, None)
    }
}

impl TryFrom<String> for EntityId {
    type Error = ModelError;
    fn try_from(value: String) -> Result<Self, Self::Error> {
        value.parse()
    }
}

impl From<EntityId> for String {
    fn from(value: EntityId) -> Self {
        value.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FacilityClass {
    Telescope,
    Observatory,
    Spacecraft,
    AirbornePlatform,
    Investigation,
    /// Untyped: pairs with every class.
    Unknown,
}

impl FacilityClass {
    pub const KNOWN: [FacilityClass; 5] = [
        FacilityClass::Telescope,
        FacilityClass::Observatory,
        FacilityClass::Spacecraft,
        FacilityClass::AirbornePlatform,
        FacilityClass::Investigation,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FacilityClass::Telescope => "telescope",
            FacilityClass::Observatory => "observatory",
            FacilityClass::Spacecraft => "spacecraft",
            FacilityClass::AirbornePlatform => "airborne_platform",
            FacilityClass::Investigation => "investigation",
            FacilityClass::Unknown => "unknown",
        }
    }

    pub fn is_known(self) -> bool {
        self != FacilityClass::Unknown
    }
}

impl fmt::Display for FacilityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FacilityClass {
    type Err = ModelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .trim()
            .to_lowercase()
            .chars()
            .filter(|c| c.is_alphanumeric())
            .collect();
        Ok(match key.as_str() {
            "telescope" => FacilityClass::Telescope,
            "observatory" => FacilityClass::Observatory,
            "spacecraft" => FacilityClass::Spacecraft,
            "airborneplatform" | "airborne" => FacilityClass::AirbornePlatform,
            "investigation" | "mission" => FacilityClass::Investigation,
            "unknown" | "" => FacilityClass::Unknown,
            _ => return Err(ModelError::UnknownClass(s.to_owned())),
        })
    }
}

/// External identifier schemes used for cross-source resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum IdScheme {
    Naif,
    Cospar,
    Nssdca,
    Mpc,
}

impl IdScheme {
    pub const ALL: [IdScheme; 4] = [IdScheme::Naif, IdScheme::Cospar, IdScheme::Nssdca, IdScheme::Mpc];

    pub fn as_str(self) -> &'static str {
        match self {
            IdScheme::Naif => "NAIF",
            IdScheme::Cospar => "COSPAR",
            IdScheme::Nssdca => "NSSDCA",
            IdScheme::Mpc => "MPC",
        }
    }

    /// Key of this scheme in the canonical record format.
    pub fn record_key(self) -> &'static str {
        match self {
            IdScheme::Naif => "naif_id",
            IdScheme::Cospar => "cospar_id",
            IdScheme::Nssdca => "nssdca_id",
            IdScheme::Mpc => "mpc_id",
        }
    }
}

impl fmt::Display for IdScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdScheme {
    type Err = ModelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        IdScheme::ALL
            .into_iter()
            .find(|scheme| scheme.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| ModelError::UnknownScheme(s.to_owned()))
    }
}

/// Primary mirror or lens size. The source spelling is kept for output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aperture {
    pub meters: f64,
    pub text: String,
}

impl Aperture {
    pub fn new(meters: f64, text: impl Into<String>) -> Self {
        Self {
            meters,
            text: text.into(),
        }
    }

    pub fn from_meters(meters: f64) -> Self {
        Self::new(meters, format!("{meters}m"))
    }
}

/// One catalog record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entity {
    pub id: EntityId,
    pub pref_label: String,
    pub alt_labels: BTreeSet<String>,
    /// Short codes and URNs (`ESO:1.52m`); treated as aliases when matching.
    pub notations: BTreeSet<String>,
    pub class: FacilityClass,
    pub external_ids: BTreeMap<IdScheme, String>,
    pub latitude: Option<f64>,
    /// Normalized to [-180, 180).
    pub longitude: Option<f64>,
    pub altitude: Option<f64>,
    pub location_name: Option<String>,
    pub aperture: Option<Aperture>,
    pub launch_year: Option<i32>,
    pub start_year: Option<i32>,
    pub end_year: Option<i32>,
    pub wavebands: BTreeSet<String>,
    pub funding_agency: Option<String>,
    pub description: Option<String>,
    /// Meronymy: the entities this one is part of.
    pub part_of: BTreeSet<EntityId>,
    pub url: Option<String>,
    pub modified: Option<NaiveDateTime>,
    pub deprecated: bool,
    pub type_confidence: Option<f64>,
    pub location_confidence: Option<f64>,
    /// Exact-match edges written into the linked catalog.
    pub exact_match: BTreeSet<EntityId>,
    /// Unreserved record fields, carried through untouched.
    pub extras: BTreeMap<String, serde_json::Value>,
}

impl Entity {
    pub fn new(id: EntityId, pref_label: impl Into<String>) -> Self {
        Self {
            id,
            pref_label: pref_label.into(),
            alt_labels: BTreeSet::new(),
            notations: BTreeSet::new(),
            class: FacilityClass::Unknown,
            external_ids: BTreeMap::new(),
            latitude: None,
            longitude: None,
            altitude: None,
            location_name: None,
            aperture: None,
            launch_year: None,
            start_year: None,
            end_year: None,
            wavebands: BTreeSet::new(),
            funding_agency: None,
            description: None,
            part_of: BTreeSet::new(),
            url: None,
            modified: None,
            deprecated: false,
            type_confidence: None,
            location_confidence: None,
            exact_match: BTreeSet::new(),
            extras: BTreeMap::new(),
        }
    }

    pub fn source(&self) -> &SourceId {
        self.id.source()
    }

    pub fn with_class(mut self, class: FacilityClass) -> Self {
        self.class = class;
        self
    }

    pub fn with_alt_label(mut self, label: impl Into<String>) -> Self {
        self.add_alt_label(label.into());
        self
    }

    pub fn with_notation(mut self, notation: impl Into<String>) -> Self {
        self.notations.insert(notation.into());
        self
    }

    pub fn with_coordinates(mut self, latitude: f64, longitude: f64) -> Self {
        self.latitude = Some(latitude);
        self.longitude = Some(normalize_longitude(longitude));
        self
    }

    pub fn with_external_id(mut self, scheme: IdScheme, value: impl Into<String>) -> Self {
        self.external_ids.insert(scheme, value.into());
        self
    }

    pub fn with_part_of(mut self, parent: EntityId) -> Self {
        self.part_of.insert(parent);
        self
    }

    /// Adds an alternative label unless it repeats the preferred one.
    pub fn add_alt_label(&mut self, label: String) {
        let label = label.trim().to_owned();
        if !label.is_empty() && label != self.pref_label {
            self.alt_labels.insert(label);
        }
    }

    /// Preferred label, alternative labels, then notations.
    pub fn labels(&self) -> impl Iterator<Item = &str> {
        std::iter::once(self.pref_label.as_str())
            .chain(self.alt_labels.iter().map(String::as_str))
            .chain(self.notations.iter().map(String::as_str))
    }

    /// Checks the record-level invariants.
    pub fn check(&self) -> Result<(), ModelError> {
        let fail = |message: &str| {
            Err(ModelError::Invariant {
                id: self.id.clone(),
                message: message.to_owned(),
            })
        };
        if self.pref_label.trim().is_empty() {
            return fail("empty preferred label");
        }
        if self.alt_labels.contains(&self.pref_label) {
            return fail("preferred label repeated among alternative labels");
        }
        if let Some(lat) = self.latitude {
            if !(-90.0..=90.0).contains(&lat) {
                return fail("latitude outside [-90, 90]");
            }
        }
        if let Some(lon) = self.longitude {
            if !(-180.0..180.0).contains(&lon) {
                return fail("longitude not normalized to [-180, 180)");
            }
        }
        Ok(())
    }

    /// Field-level equality ignoring bookkeeping (`modified`, `extras`).
    pub fn same_content(&self, other: &Entity) -> bool {
        let strip = |e: &Entity| {
            let mut e = e.clone();
            e.modified = None;
            e.extras.clear();
            e
        };
        strip(self) == strip(other)
    }
}

/// Maps any longitude to [-180, 180); sources mixing a [0, 360) convention
/// are converted at ingest.
pub fn normalize_longitude(lon: f64) -> f64 {
    if (-180.0..180.0).contains(&lon) {
        return lon;
    }
    let wrapped = (lon + 180.0).rem_euclid(360.0) - 180.0;
    if wrapped >= 180.0 {
        wrapped - 360.0
    } else {
        wrapped
    }
}
