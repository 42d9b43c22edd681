//! Multi-source entity matching for observation-facility catalogs.
//!
//! `facmatch` aligns catalogs of named entities (telescopes, observatories,
//! spacecraft, airborne platforms, investigations) coming from several
//! sources into synonym sets, each carrying one preferred label. Alignment
//! is programmed by a mapping-strategy file: every line names two sources,
//! an optional class filter and an ordered list of filtering criteria and
//! similarity scores. For each line the pipeline
//!
//! 1. resolves shared external identifiers,
//! 2. generates candidate pairs among the entities not yet aligned,
//! 3. applies accept/reject criteria in strategy order,
//! 4. scores the surviving pairs and ranks them by weighted global score,
//! 5. validates them one by one, stopping after a run of rejections.
//!
//! The result is published as an SSSOM mapping document, a name-resolver
//! dictionary, a meronymy CSV and a linked catalog; [`resolver`] serves the
//! dictionary over HTTP.
//!
//! Start with [`pipeline::Pipeline`] for the end-to-end flow, or the
//! per-module entry points for individual pieces. The `examples/` directory
//! of this crate has one runnable program per capability.

pub mod clock;
pub mod diagnostics;
pub mod emit;
pub mod ingest;
pub mod matcher;
pub mod model;
pub mod pipeline;
pub mod profile;
pub mod resolver;
pub mod scoring;
pub mod strategy;
pub mod validate;

#[cfg(test)]
mod testutil;

pub use clock::{Clock, FixedClock, SystemClock};
pub use diagnostics::{Diagnostic, Diagnostics, Level};
pub use model::{
    Aperture, Catalog, Entity, EntityId, EntityRef, FacilityClass, IdScheme, SetRegistry,
    SourceId, SourcePriority, SynonymSet,
};
pub use pipeline::{Pipeline, PipelineOutcome, RunConfig, RunReport};
pub use strategy::{Strategy, StrategyLine};
