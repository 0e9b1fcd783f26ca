//! Piecewise-elementary self-maps of interval unions, map families and their
//! compositions along words.

mod catalog;
mod domain;
mod expr;
mod family;
mod piecewise;
mod schema;

pub use catalog::{
    catalog, definicija, exx2, exx3, relation_h, suspension_g, tent, tent_inverse, CATALOG_NAMES,
};
pub use domain::{Interval, IntervalUnionDomain};
pub use expr::{ElementaryExpr, Exponent};
pub use family::MapFamily;
pub use piecewise::{Piece, PiecewiseMap};
pub use schema::{family_from_json, family_to_json, BranchSpec, ExprSpec, FamilySpec, PieceSpec};

use crate::error::Result;
use crate::scalar::Real;
use crate::symbolic::FiniteWord;

/// Free-function form of [`MapFamily::compose_word`].
pub fn compose_word<R: Real>(family: &MapFamily<R>, word: &FiniteWord, t: R) -> Result<R> {
    family.compose_word(word, t)
}

/// Free-function form of [`MapFamily::inverse_word_compose`].
pub fn inverse_word_compose<R: Real>(family: &MapFamily<R>, word: &FiniteWord, t: R) -> Result<R> {
    family.inverse_word_compose(word, t)
}

/// `f_1^k(f_0^h(x))` for the relation-H branches, in closed form and log space:
/// `ln = (3^h/2^k)·(ln(1/2)/2 + ln x) − 2^{-(k+1)}·ln(1/2)`.
pub fn h_iterate_closed_form<R: Real>(x: R, h: u64, k: u64) -> R {
    let ln_half = -R::LN_2();
    let ratio = (R::from_u64_lossy(h) * R::lit(3.0).ln() - R::from_u64_lossy(k) * R::LN_2()).exp();
    let tail = R::lit(2.0).powf(-R::from_u64_lossy(k + 1)) * ln_half;
    (ratio * (ln_half / R::lit(2.0) + x.ln()) - tail).exp()
}
