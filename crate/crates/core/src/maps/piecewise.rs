use crate::error::{Error, Result};
use crate::maps::domain::{Interval, IntervalUnionDomain};
use crate::maps::expr::ElementaryExpr;
use crate::scalar::Real;

/// One piece of a piecewise map: `expr` applies on the closed `interval`.
#[derive(Clone, Debug, PartialEq)]
pub struct Piece<R> {
    pub interval: Interval<R>,
    pub expr: ElementaryExpr<R>,
}

impl<R: Real> Piece<R> {
    pub fn new(lo: R, hi: R, expr: ElementaryExpr<R>) -> Result<Self> {
        Ok(Self {
            interval: Interval::new(lo, hi)?,
            expr,
        })
    }

    /// `[min, max]` of the piece's values.
    pub fn image(&self) -> Interval<R> {
        let Interval { lo, hi } = self.interval;
        let mut vals = vec![self.expr.eval(lo), self.expr.eval(hi)];
        if let Some(s) = self.expr.turning_point(lo, hi) {
            vals.push(self.expr.eval(s));
        }
        let min = vals.iter().copied().fold(R::infinity(), R::min);
        let max = vals.iter().copied().fold(R::neg_infinity(), R::max);
        Interval { lo: min, hi: max }
    }
}

/// A continuous self-map of an [`IntervalUnionDomain`] given by elementary pieces.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseMap<R> {
    domain: IntervalUnionDomain<R>,
    pieces: Vec<Piece<R>>,
    invertible: bool,
    injective: bool,
    inverse_pieces: Vec<Piece<R>>,
}

impl<R: Real> PiecewiseMap<R> {
    /// Validates coverage, continuity at breakpoints, image containment and, when
    /// `invertible` is set, bijectivity.
    pub fn new(domain: IntervalUnionDomain<R>, pieces: Vec<Piece<R>>, invertible: bool) -> Result<Self> {
        let tol = R::identity_tol();
        let mut by_component: Vec<Vec<&Piece<R>>> = vec![Vec::new(); domain.intervals().len()];
        for p in &pieces {
            let mid = (p.interval.lo + p.interval.hi) / R::lit(2.0);
            let c = domain
                .locate(mid)
                .filter(|&c| {
                    let iv = domain.intervals()[c];
                    iv.contains(p.interval.lo, tol) && iv.contains(p.interval.hi, tol)
                })
                .ok_or_else(|| Error::InvalidMap(format!("piece [{}, {}] outside domain", p.interval.lo, p.interval.hi)))?;
            by_component[c].push(p);
        }
        for (c, ps) in by_component.iter().enumerate() {
            let iv = domain.intervals()[c];
            let mut at = iv.lo;
            for p in ps {
                if (p.interval.lo - at).abs() > tol {
                    return Err(Error::InvalidMap(format!("gap or overlap at {at}")));
                }
                at = p.interval.hi;
            }
            if ps.is_empty() || (at - iv.hi).abs() > tol {
                return Err(Error::InvalidMap(format!("component [{}, {}] not covered", iv.lo, iv.hi)));
            }
            for w in ps.windows(2) {
                let b = w[0].interval.hi;
                let left = w[0].expr.eval(b);
                let right = w[1].expr.eval(b);
                if !((left - right).abs() <= tol * R::one().max(left.abs())) {
                    return Err(Error::InvalidMap(format!("discontinuity at {b}")));
                }
            }
        }
        let mut ordered: Vec<Piece<R>> = by_component.into_iter().flatten().cloned().collect();
        ordered.sort_by(|a, b| a.interval.lo.partial_cmp(&b.interval.lo).expect("finite"));
        for p in &ordered {
            let img = p.image();
            if !img.lo.is_finite() || !img.hi.is_finite() || !domain.contains(img.lo) || !domain.contains(img.hi) {
                return Err(Error::InvalidMap(format!(
                    "piece [{}, {}] maps outside the domain",
                    p.interval.lo, p.interval.hi
                )));
            }
        }
        let injective = Self::check_injective(&ordered);
        let inverse_pieces = if injective {
            ordered
                .iter()
                .map(|p| {
                    Ok(Piece {
                        interval: p.image(),
                        expr: p.expr.inverse()?,
                    })
                })
                .collect::<Result<Vec<_>>>()?
        } else {
            Vec::new()
        };
        if invertible {
            if !injective {
                return Err(Error::InvalidMap("declared invertible but not injective".into()));
            }
            let total: R = inverse_pieces
                .iter()
                .fold(R::zero(), |acc, p| acc + p.interval.length());
            let dom_total: R = domain.intervals().iter().fold(R::zero(), |acc, iv| acc + iv.length());
            if (total - dom_total).abs() > R::iterated_tol() {
                return Err(Error::InvalidMap("declared invertible but not surjective".into()));
            }
        }
        Ok(Self {
            domain,
            pieces: ordered,
            invertible,
            injective,
            inverse_pieces,
        })
    }

    /// Single-piece map on an interval domain.
    pub fn single(lo: R, hi: R, expr: ElementaryExpr<R>, invertible: bool) -> Result<Self> {
        Self::new(IntervalUnionDomain::interval(lo, hi)?, vec![Piece::new(lo, hi, expr)?], invertible)
    }

    fn check_injective(pieces: &[Piece<R>]) -> bool {
        if !pieces.iter().all(|p| p.expr.strictly_monotone(p.interval.lo, p.interval.hi)) {
            return false;
        }
        let mut images: Vec<Interval<R>> = pieces.iter().map(Piece::image).collect();
        images.sort_by(|a, b| a.lo.partial_cmp(&b.lo).expect("finite"));
        images
            .windows(2)
            .all(|w| w[0].hi <= w[1].lo + R::identity_tol())
    }

    pub fn domain(&self) -> &IntervalUnionDomain<R> {
        &self.domain
    }

    pub fn pieces(&self) -> &[Piece<R>] {
        &self.pieces
    }

    /// Declared bijection of the domain.
    pub fn is_invertible(&self) -> bool {
        self.invertible
    }

    pub fn is_injective(&self) -> bool {
        self.injective
    }

    pub fn eval(&self, t: R) -> Result<R> {
        let slack = R::identity_tol();
        let piece = self
            .pieces
            .iter()
            .find(|p| p.interval.contains(t, slack))
            .ok_or(Error::OutOfDomain(t.to_f64_lossy()))?;
        let v = piece.expr.eval(piece.interval.clamp(t));
        self.domain.snap(v)
    }

    /// Evaluation in log coordinates: given `u = ln t`, returns `ln f(t)`.
    ///
    /// Only meaningful on nonnegative domains; values at 0 are `-inf`.
    pub fn eval_log(&self, u: R) -> Result<R> {
        if u.is_nan() || u > self.domain.max().ln() + R::identity_tol() {
            return Err(Error::OutOfDomain(u.exp().to_f64_lossy()));
        }
        if u == R::neg_infinity() {
            return self.eval(R::zero()).map(R::ln);
        }
        let slack = R::identity_tol();
        let piece = self
            .pieces
            .iter()
            .find(|p| {
                let lo = p.interval.lo.ln();
                let hi = p.interval.hi.ln();
                (p.interval.lo <= R::zero() || u >= lo - slack) && u <= hi + slack
            })
            .ok_or(Error::OutOfDomain(u.exp().to_f64_lossy()))?;
        let hi = piece.interval.hi.ln();
        let u = if u > hi { hi } else { u };
        let v = piece
            .expr
            .eval_log(u)
            .ok_or(Error::OutOfDomain(u.exp().to_f64_lossy()))?;
        Ok(v.min(self.domain.max().ln()))
    }

    /// Preimage of `t` for an injective map.
    pub fn invert(&self, t: R) -> Result<R> {
        if !self.injective {
            return Err(Error::NotInvertible);
        }
        let slack = R::identity_tol();
        let piece = self
            .inverse_pieces
            .iter()
            .find(|p| p.interval.contains(t, slack))
            .ok_or(Error::OutOfImage(t.to_f64_lossy()))?;
        let v = piece.expr.eval(piece.interval.clamp(t));
        self.domain.snap(v)
    }

    /// `[min, max]` of the whole image, component by component.
    pub fn image_intervals(&self) -> Vec<Interval<R>> {
        self.pieces.iter().map(Piece::image).collect()
    }

    /// Converts the map's coefficients to another scalar type.
    pub fn cast<S: Real>(&self) -> Result<PiecewiseMap<S>> {
        let c = |x: R| S::lit(x.to_f64_lossy());
        let domain = IntervalUnionDomain::new(
            self.domain
                .intervals()
                .iter()
                .map(|iv| Interval::new(c(iv.lo), c(iv.hi)))
                .collect::<Result<Vec<_>>>()?,
        )?;
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                let expr = match p.expr {
                    ElementaryExpr::Affine { a, b } => ElementaryExpr::Affine { a: c(a), b: c(b) },
                    ElementaryExpr::Power(e) => ElementaryExpr::Power(e),
                    ElementaryExpr::ScaledPower { c: k, p: e, s_in, s_out } => ElementaryExpr::ScaledPower {
                        c: c(k),
                        p: e,
                        s_in: c(s_in),
                        s_out: c(s_out),
                    },
                };
                Piece::new(c(p.interval.lo), c(p.interval.hi), expr)
            })
            .collect::<Result<Vec<_>>>()?;
        PiecewiseMap::new(domain, pieces, self.invertible)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::expr::Exponent;

    #[test]
    fn rejects_gap() {
        let d = IntervalUnionDomain::interval(0.0, 1.0).unwrap();
        let pieces = vec![Piece::new(0.0, 0.4, ElementaryExpr::affine(1.0, 0.0)).unwrap()];
        assert!(PiecewiseMap::new(d, pieces, false).is_err());
    }

    #[test]
    fn rejects_discontinuity() {
        let d = IntervalUnionDomain::interval(0.0, 1.0).unwrap();
        let pieces = vec![
            Piece::new(0.0, 0.5, ElementaryExpr::affine(1.0, 0.0)).unwrap(),
            Piece::new(0.5, 1.0, ElementaryExpr::affine(1.0, 0.1)).unwrap(),
        ];
        assert!(matches!(PiecewiseMap::new(d, pieces, false), Err(Error::InvalidMap(_))));
    }

    #[test]
    fn injective_but_not_surjective() {
        let f0 = PiecewiseMap::single(0.0f64, 1.0, ElementaryExpr::scaled_power(0.5, Exponent::integer(3), 0.0), false)
            .unwrap();
        assert!(f0.is_injective() && !f0.is_invertible());
        assert!((f0.invert(1.0 / 16.0).unwrap() - 0.5).abs() < 1e-12);
        assert!(matches!(f0.invert(0.9), Err(Error::OutOfImage(_))));
        assert!(PiecewiseMap::single(0.0, 1.0, ElementaryExpr::scaled_power(0.5, Exponent::integer(3), 0.0), true)
            .is_err());
    }

    #[test]
    fn eval_outside_domain() {
        let f = PiecewiseMap::single(0.0, 1.0, ElementaryExpr::<f64>::power(2, 1), true).unwrap();
        assert!(matches!(f.eval(1.5), Err(Error::OutOfDomain(_))));
        assert_eq!(f.eval(1.0 + 1e-13).unwrap(), 1.0);
    }
}
