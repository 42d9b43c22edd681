//! Candidate generation, external-identifier resolution and filtering
//! criteria.

pub mod criteria;
pub mod external_ids;
pub mod geo;
pub mod pairs;

pub use criteria::{evaluate_criterion, Criterion, Decision, Side, MAX_DISTANCE_KM};
pub use external_ids::{resolve_external_ids, IdMatch};
pub use geo::{geodesic_km, EARTH_RADIUS_KM};
pub use pairs::{filter_list, generate_pairs, sides, CandidatePair, PairStatus};
