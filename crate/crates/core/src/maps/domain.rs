use crate::error::{Error, Result};
use crate::scalar::Real;

/// Closed interval `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval<R> {
    pub lo: R,
    pub hi: R,
}

impl<R: Real> Interval<R> {
    pub fn new(lo: R, hi: R) -> Result<Self> {
        if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidMap(format!("interval [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn contains(&self, t: R, slack: R) -> bool {
        self.lo - slack <= t && t <= self.hi + slack
    }

    pub fn clamp(&self, t: R) -> R {
        t.max(self.lo).min(self.hi)
    }

    pub fn length(&self) -> R {
        self.hi - self.lo
    }
}

/// A finite union of disjoint closed intervals, sorted ascending.
///
/// Membership is inflated by [`Real::identity_tol`].
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalUnionDomain<R> {
    intervals: Vec<Interval<R>>,
}

impl<R: Real> IntervalUnionDomain<R> {
    pub fn new(intervals: Vec<Interval<R>>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::InvalidMap("empty domain".into()));
        }
        for pair in intervals.windows(2) {
            if !(pair[0].hi < pair[1].lo) {
                return Err(Error::InvalidMap(
                    "domain intervals must be sorted and disjoint".into(),
                ));
            }
        }
        Ok(Self { intervals })
    }

    pub fn interval(lo: R, hi: R) -> Result<Self> {
        Self::new(vec![Interval::new(lo, hi)?])
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        let intervals = pairs
            .iter()
            .map(|&(a, b)| Interval::new(R::lit(a), R::lit(b)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(intervals)
    }

    pub fn intervals(&self) -> &[Interval<R>] {
        &self.intervals
    }

    pub fn min(&self) -> R {
        self.intervals[0].lo
    }

    pub fn max(&self) -> R {
        self.intervals[self.intervals.len() - 1].hi
    }

    pub fn diameter(&self) -> R {
        self.max() - self.min()
    }

    pub fn contains(&self, t: R) -> bool {
        self.locate(t).is_some()
    }

    /// Index of the component containing `t`.
    pub fn locate(&self, t: R) -> Option<usize> {
        let slack = R::identity_tol();
        self.intervals.iter().position(|iv| iv.contains(t, slack))
    }

    /// Moves a value within the membership slack onto the domain.
    pub fn snap(&self, t: R) -> Result<R> {
        match self.locate(t) {
            Some(i) => Ok(self.intervals[i].clamp(t)),
            None => Err(Error::OutOfDomain(t.to_f64_lossy())),
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.min() >= R::zero()
    }
}
