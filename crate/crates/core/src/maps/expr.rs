use serde::{Deserialize, Serialize};

use crate::cfrac::best_rational;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// A rational exponent `num / den` in lowest terms with `den > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Exponent {
    num: i32,
    den: u32,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Exponent {
    pub fn new(num: i32, den: u32) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidMap("exponent with zero denominator".into()));
        }
        let g = gcd(num.unsigned_abs() as u64, den as u64).max(1) as i64;
        Ok(Self {
            num: (num as i64 / g) as i32,
            den: (den as i64 / g) as u32,
        })
    }

    pub fn integer(n: i32) -> Self {
        Self { num: n, den: 1 }
    }

    /// Rational exponent nearest to `p` with denominator at most 64.
    pub fn approximate(p: f64) -> Result<Self> {
        if !p.is_finite() {
            return Err(Error::InvalidMap(format!("exponent {p}")));
        }
        let (num, den) = best_rational(p, 64);
        Self::new(num as i32, den as u32)
    }

    pub fn num(&self) -> i32 {
        self.num
    }

    pub fn den(&self) -> u32 {
        self.den
    }

    pub fn value<R: Real>(&self) -> R {
        R::lit(self.num as f64) / R::lit(self.den as f64)
    }

    pub fn recip(&self) -> Result<Self> {
        if self.num == 0 {
            return Err(Error::NotInvertible);
        }
        let sign = self.num.signum();
        Self::new(sign * self.den as i32, self.num.unsigned_abs())
    }

    /// Whether `t^p` is real for negative `t`.
    pub fn odd_root(&self) -> bool {
        self.den % 2 == 1
    }

    /// Whether `t ↦ t^p` is even on its full real domain.
    pub fn even(&self) -> bool {
        self.odd_root() && self.num % 2 == 0
    }

    /// `t^{num/den}`, sign preserving for odd denominators; `None` when not real.
    pub fn apply<R: Real>(&self, t: R) -> Option<R> {
        if t < R::zero() {
            if !self.odd_root() {
                return None;
            }
            let mag = self.apply_nonneg(-t);
            return Some(if self.num % 2 == 0 { mag } else { -mag });
        }
        Some(self.apply_nonneg(t))
    }

    fn apply_nonneg<R: Real>(&self, t: R) -> R {
        let root = match self.den {
            1 => t,
            2 => t.sqrt(),
            3 => t.cbrt(),
            _ => return t.powf(self.value()),
        };
        root.powi(self.num)
    }
}

/// Elementary expressions used by map pieces.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ElementaryExpr<R> {
    /// `a·t + b`
    Affine { a: R, b: R },
    /// `t^p`
    Power(Exponent),
    /// `c·(t − s_in)^p + s_out`
    ScaledPower {
        c: R,
        p: Exponent,
        s_in: R,
        s_out: R,
    },
}

impl<R: Real> ElementaryExpr<R> {
    pub fn affine(a: R, b: R) -> Self {
        Self::Affine { a, b }
    }

    pub fn power(num: i32, den: u32) -> Self {
        Self::Power(Exponent::new(num, den).expect("nonzero denominator"))
    }

    pub fn scaled_power(c: R, p: Exponent, s: R) -> Self {
        Self::ScaledPower {
            c,
            p,
            s_in: s,
            s_out: s,
        }
    }

    /// Value at `t`; NaN where the expression is not real.
    pub fn eval(&self, t: R) -> R {
        match *self {
            Self::Affine { a, b } => a * t + b,
            Self::Power(p) => p.apply(t).unwrap_or_else(R::nan),
            Self::ScaledPower { c, p, s_in, s_out } => {
                p.apply(t - s_in).map_or_else(R::nan, |v| c * v + s_out)
            }
        }
    }

    /// `ln(eval(e^u))` for positive arguments and values, without leaving log space
    /// where the expression allows it.
    pub fn eval_log(&self, u: R) -> Option<R> {
        match *self {
            Self::Affine { a, b } => {
                if b == R::zero() {
                    return (a > R::zero()).then(|| a.ln() + u);
                }
                let s = a + b;
                if s > R::zero() {
                    let r = a * u.exp_m1() / s;
                    (r > -R::one()).then(|| s.ln() + r.ln_1p())
                } else {
                    let v = a * u.exp() + b;
                    (v > R::zero()).then(|| v.ln())
                }
            }
            Self::Power(p) => Some(p.value::<R>() * u),
            Self::ScaledPower { c, p, s_in, s_out } => {
                if s_in == R::zero() && s_out == R::zero() && c > R::zero() {
                    Some(c.ln() + p.value::<R>() * u)
                } else {
                    let v = self.eval(u.exp());
                    (v > R::zero()).then(|| v.ln())
                }
            }
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        match *self {
            Self::Affine { a, b } => {
                if a == R::zero() {
                    return Err(Error::NotInvertible);
                }
                Ok(Self::Affine {
                    a: a.recip(),
                    b: -b / a,
                })
            }
            Self::Power(p) => Ok(Self::Power(p.recip()?)),
            Self::ScaledPower { c, p, s_in, s_out } => {
                if c == R::zero() {
                    return Err(Error::NotInvertible);
                }
                let q = p.recip()?;
                let c_inv = q.apply(c.recip()).ok_or(Error::NotInvertible)?;
                Ok(Self::ScaledPower {
                    c: c_inv,
                    p: q,
                    s_in: s_out,
                    s_out: s_in,
                })
            }
        }
    }

    /// Interior turning point, if any, of the expression on `[lo, hi]`.
    pub fn turning_point(&self, lo: R, hi: R) -> Option<R> {
        let (p, s) = match *self {
            Self::Affine { .. } => return None,
            Self::Power(p) => (p, R::zero()),
            Self::ScaledPower { p, s_in, .. } => (p, s_in),
        };
        (p.even() && lo < s && s < hi).then_some(s)
    }

    /// Strictly monotone on `[lo, hi]`.
    pub fn strictly_monotone(&self, lo: R, hi: R) -> bool {
        match *self {
            Self::Affine { a, .. } => a != R::zero(),
            Self::Power(p) | Self::ScaledPower { p, .. } => {
                p.num() != 0 && self.turning_point(lo, hi).is_none()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_root_is_sign_preserving() {
        let e = ElementaryExpr::<f64>::power(1, 3);
        assert!((e.eval(-8.0) + 2.0).abs() < 1e-15);
        let sq = ElementaryExpr::<f64>::power(1, 2);
        assert!(sq.eval(-1.0).is_nan());
    }

    #[test]
    fn scaled_power_inverse() {
        let e = ElementaryExpr::scaled_power(1.0f64, Exponent::new(1, 3).unwrap(), 2.0);
        let inv = e.inverse().unwrap();
        for t in [2.0, 2.3, 2.9, 3.0] {
            assert!((inv.eval(e.eval(t)) - t).abs() < 1e-12);
        }
        let h0 = ElementaryExpr::scaled_power(0.5f64, Exponent::integer(3), 0.0);
        assert!((h0.inverse().unwrap().eval(1.0 / 16.0) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn log_space_matches_direct() {
        let exprs = [
            ElementaryExpr::affine(0.5, 0.0),
            ElementaryExpr::affine(2.0, -1.0),
            ElementaryExpr::power(1, 2),
            ElementaryExpr::scaled_power(0.5, Exponent::integer(3), 0.0),
        ];
        for e in exprs {
            for t in [0.7f64, 0.8, 0.95] {
                let direct = e.eval(t).ln();
                let logged = e.eval_log(t.ln()).unwrap();
                assert!((direct - logged).abs() < 1e-12, "{e:?} at {t}");
            }
        }
    }

    #[test]
    fn exponent_approximation() {
        let p = Exponent::approximate(0.3333).unwrap();
        assert_eq!((p.num(), p.den()), (1, 3));
        assert_eq!(p.recip().unwrap(), Exponent::integer(3));
    }
}
