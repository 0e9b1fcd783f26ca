//! Mahavier products of a closed relation: finite words, two-sided windows,
//! enumeration, shifts, the interleaving map onto one-sided words, and metrics.

mod ops;
mod relation;
mod word;

pub use ops::{
    conjugacy_s, conjugacy_s_inverse, enumerate_mahavier, forward_impression_sample, interleave_t,
    metric_d2, metric_dplus, net_coverage, phi_pair_to_window, MetricValue, DEFAULT_NODE_BUDGET,
};
pub use relation::{BranchMeetReport, ClosedRelation};
pub use word::{BackwardWord, MahavierWord, TwoSidedMahavierWindow};

use crate::error::Result;
use crate::scalar::Real;

/// Free-function form of [`MahavierWord::shift_forward_truncated`].
pub fn shift_forward_truncated<R: Real>(w: &MahavierWord<R>) -> Result<MahavierWord<R>> {
    w.shift_forward_truncated()
}

/// Free-function form of [`TwoSidedMahavierWindow::shift`].
pub fn shift_two_sided_window<R: Real>(
    w: &TwoSidedMahavierWindow<R>,
    direction: crate::symbolic::Direction,
) -> Result<TwoSidedMahavierWindow<R>> {
    w.shift(direction)
}
