//! Built-in map families.

use crate::error::{Error, Result};
use crate::maps::domain::IntervalUnionDomain;
use crate::maps::expr::{ElementaryExpr, Exponent};
use crate::maps::family::MapFamily;
use crate::maps::piecewise::{Piece, PiecewiseMap};
use crate::scalar::{lit, Real};

pub const CATALOG_NAMES: &[&str] = &[
    "definicija",
    "exx1",
    "suspension-G",
    "exx2",
    "exx3",
    "H",
    "tent",
    "tent-inverse",
];

/// Looks up a catalog family by name.
pub fn catalog<R: Real>(name: &str) -> Result<MapFamily<R>> {
    match name {
        "definicija" => definicija(),
        "exx1" | "suspension-G" => suspension_g(),
        "exx2" => exx2(),
        "exx3" => exx3(),
        "H" | "relation-H" => relation_h(),
        "tent" => tent(),
        "tent-inverse" => tent_inverse(),
        other => Err(Error::UnknownName(other.to_string())),
    }
}

fn unit<R: Real>() -> Result<IntervalUnionDomain<R>> {
    IntervalUnionDomain::interval(R::zero(), R::one())
}

/// `f1 = √t`, `f2` halves below 2/3 and doubles-minus-one above, `f3 = t²`.
pub fn definicija<R: Real>() -> Result<MapFamily<R>> {
    let (z, one) = (R::zero(), R::one());
    let two_thirds = lit::<R>(2.0) / lit(3.0);
    let f1 = PiecewiseMap::single(z, one, ElementaryExpr::power(1, 2), true)?;
    let f2 = PiecewiseMap::new(
        unit()?,
        vec![
            Piece::new(z, two_thirds, ElementaryExpr::affine(lit(0.5), z))?,
            Piece::new(two_thirds, one, ElementaryExpr::affine(lit(2.0), -one))?,
        ],
        true,
    )?;
    let f3 = PiecewiseMap::single(z, one, ElementaryExpr::power(2, 1), true)?;
    MapFamily::new("definicija", vec![f1, f2, f3])
}

/// `x²` and `x^{1/3}` on `[0, 1]`.
pub fn suspension_g<R: Real>() -> Result<MapFamily<R>> {
    let (z, one) = (R::zero(), R::one());
    MapFamily::new(
        "suspension-G",
        vec![
            PiecewiseMap::single(z, one, ElementaryExpr::power(2, 1), true)?,
            PiecewiseMap::single(z, one, ElementaryExpr::power(1, 3), true)?,
        ],
    )
}

/// Two homeomorphisms of `[0, 1] ∪ [2, 3]`; the second swaps the components.
pub fn exx2<R: Real>() -> Result<MapFamily<R>> {
    let (z, one, two, three) = (R::zero(), R::one(), lit::<R>(2.0), lit::<R>(3.0));
    let dom = IntervalUnionDomain::from_pairs(&[(0.0, 1.0), (2.0, 3.0)])?;
    let f1 = PiecewiseMap::new(
        dom.clone(),
        vec![
            Piece::new(z, one, ElementaryExpr::power(2, 1))?,
            Piece::new(two, three, ElementaryExpr::scaled_power(one, Exponent::new(1, 3)?, two))?,
        ],
        true,
    )?;
    let f2 = PiecewiseMap::new(
        dom,
        vec![
            Piece::new(z, one, ElementaryExpr::affine(one, two))?,
            Piece::new(two, three, ElementaryExpr::affine(one, -two))?,
        ],
        true,
    )?;
    MapFamily::new("exx2", vec![f1, f2])
}

/// `f1 = −x` and `f2` equal to `x^{1/3}` on `[−1, 0]`, `x²` on `[0, 1]`.
pub fn exx3<R: Real>() -> Result<MapFamily<R>> {
    let (z, one) = (R::zero(), R::one());
    let f1 = PiecewiseMap::single(-one, one, ElementaryExpr::affine(-one, z), true)?;
    let f2 = PiecewiseMap::new(
        IntervalUnionDomain::interval(-one, one)?,
        vec![
            Piece::new(-one, z, ElementaryExpr::power(1, 3))?,
            Piece::new(z, one, ElementaryExpr::power(2, 1))?,
        ],
        true,
    )?;
    MapFamily::new("exx3", vec![f1, f2])
}

/// Branch 1 is `f0(x) = x³/2`, branch 2 is `f1(x) = √x`, both on `[0, 1]`.
pub fn relation_h<R: Real>() -> Result<MapFamily<R>> {
    let (z, one) = (R::zero(), R::one());
    let f0 = PiecewiseMap::single(z, one, ElementaryExpr::scaled_power(lit(0.5), Exponent::integer(3), z), false)?;
    let f1 = PiecewiseMap::single(z, one, ElementaryExpr::power(1, 2), false)?;
    MapFamily::new("H", vec![f0, f1])
}

/// The tent map `2x` / `2 − 2x`.
pub fn tent<R: Real>() -> Result<MapFamily<R>> {
    let (z, one, two) = (R::zero(), R::one(), lit::<R>(2.0));
    let half = lit::<R>(0.5);
    let f = PiecewiseMap::new(
        unit()?,
        vec![
            Piece::new(z, half, ElementaryExpr::affine(two, z))?,
            Piece::new(half, one, ElementaryExpr::affine(-two, two))?,
        ],
        false,
    )?;
    MapFamily::new("tent", vec![f])
}

/// The two inverse branches `t/2` and `1 − t/2` of the tent map; their graphs
/// form the inverse of the tent map's graph.
pub fn tent_inverse<R: Real>() -> Result<MapFamily<R>> {
    let (z, one, half) = (R::zero(), R::one(), lit::<R>(0.5));
    MapFamily::new(
        "tent-inverse",
        vec![
            PiecewiseMap::single(z, one, ElementaryExpr::affine(half, z), false)?,
            PiecewiseMap::single(z, one, ElementaryExpr::affine(-half, one), false)?,
        ],
    )
}
