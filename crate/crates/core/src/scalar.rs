//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar accepted by the generic code paths.
///
/// Implemented for `f32` and `f64`. Tolerances scale with machine epsilon so that
/// the `f32` instantiation does not demand accuracy it cannot represent.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).unwrap_or_else(Self::nan)
    }

    /// Tolerance for single-step identities (round trips, membership, dedup).
    fn identity_tol() -> Self {
        Self::lit(1e-12).max(Self::epsilon() * Self::lit(64.0))
    }

    /// Tolerance for iterated compositions and relation-constraint checks.
    fn iterated_tol() -> Self {
        Self::lit(1e-9).max(Self::epsilon() * Self::lit(4096.0))
    }

    fn from_u64_lossy(n: u64) -> Self {
        Self::from_u64(n).unwrap_or_else(Self::infinity)
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Shorthand for [`Real::lit`].
#[inline]
pub fn lit<R: Real>(x: f64) -> R {
    R::lit(x)
}

/// `|a - b| <= tol`.
#[inline]
pub fn close<R: Real>(a: R, b: R, tol: R) -> bool {
    (a - b).abs() <= tol
}
