//! Skew products over full shifts, the transitive-point construction, chains
//! of cylinders on Mahavier products, and orbit coverage.

mod conjugacy;
mod coverage;
mod sigma_chain;
mod skew;
mod target;
mod transitive_point;

pub use conjugacy::{
    bonding_defect, shift_inverse_limit, skew_step_via_inverse_limit, t_forward, t_inverse, InverseLimitPoint,
};
pub use coverage::{orbit_coverage, CoverageReport, CoverageRow, Probe};
pub use sigma_chain::{auto_box_targets, build_sigma_chain, verify_sigma_chain, SigmaChain};
pub use skew::{skew_orbit, skew_step, SkewState, SkewSystem, SymbolState};
pub use target::{
    auto_skew_targets, default_eps_schedule, diagonal_pair, dyadic, load_targets, word_at, CylinderTarget, SkewTarget,
    TargetsFile,
};
pub use transitive_point::{build_transitive_point, verify_transitive_point, HitRecord, TransitivePoint, HIT_SLACK};
