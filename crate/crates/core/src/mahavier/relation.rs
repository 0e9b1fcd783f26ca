use std::sync::OnceLock;

use crate::error::Result;
use crate::maps::{IntervalUnionDomain, MapFamily};
use crate::scalar::Real;
use crate::symbolic::{Alphabet, Symbol};

/// Verdict of the root-isolation check behind [`ClosedRelation::branches_meet_only_at_fixed_points`].
#[derive(Clone, Debug, PartialEq)]
pub struct BranchMeetReport<R> {
    /// Points where two distinct branches agree, after refinement.
    pub meeting_points: Vec<R>,
    /// Every meeting point is fixed by every branch and no two branches coincide
    /// on a sampled subinterval.
    pub holds: bool,
}

/// A closed relation `F ⊆ X × X` given as the union of the graphs of a family.
#[derive(Clone, Debug)]
pub struct ClosedRelation<R> {
    family: MapFamily<R>,
    meet_report: OnceLock<BranchMeetReport<R>>,
}

impl<R: Real> PartialEq for ClosedRelation<R> {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family
    }
}

impl<R: Real> ClosedRelation<R> {
    pub fn from_family(family: MapFamily<R>) -> Self {
        Self {
            family,
            meet_report: OnceLock::new(),
        }
    }

    pub fn family(&self) -> &MapFamily<R> {
        &self.family
    }

    pub fn alphabet(&self) -> Alphabet {
        self.family.alphabet()
    }

    pub fn branch_count(&self) -> usize {
        self.family.len()
    }

    pub fn domain(&self) -> &IntervalUnionDomain<R> {
        self.family.domain()
    }

    pub fn diameter(&self) -> R {
        self.domain().diameter()
    }

    pub fn branch(&self, s: Symbol, x: R) -> Result<R> {
        self.family.get(s)?.eval(x)
    }

    /// `F(x)` as `(branch, value)` pairs. Values closer than the identity
    /// tolerance are merged and keep the lowest branch index.
    pub fn successors(&self, x: R) -> Result<Vec<(Symbol, R)>> {
        let tol = R::identity_tol();
        let mut out: Vec<(Symbol, R)> = Vec::with_capacity(self.branch_count());
        for s in self.alphabet().symbols() {
            let y = self.branch(s, x)?;
            if !out.iter().any(|&(_, v)| (v - y).abs() <= tol) {
                out.push((s, y));
            }
        }
        Ok(out)
    }

    /// Lowest branch `s` with `|f_s(x) − y| <= tol`.
    pub fn certify_pair(&self, x: R, y: R, tol: R) -> Option<Symbol> {
        self.alphabet().symbols().find(|&s| {
            self.branch(s, x)
                .map(|v| (v - y).abs() <= tol)
                .unwrap_or(false)
        })
    }

    /// Number of branches certifying the pair at `tol`.
    pub fn certifying_count(&self, x: R, y: R, tol: R) -> usize {
        self.alphabet()
            .symbols()
            .filter(|&s| self.branch(s, x).map(|v| (v - y).abs() <= tol).unwrap_or(false))
            .count()
    }

    /// Is `a` fixed by every branch?
    pub fn is_common_fixed_point(&self, a: R, tol: R) -> bool {
        self.alphabet()
            .symbols()
            .all(|s| self.branch(s, a).map(|v| (v - a).abs() <= tol).unwrap_or(false))
    }

    /// Checks by root isolation that two branches agree only at points fixed by
    /// every branch. Cached after the first call.
    pub fn branches_meet_only_at_fixed_points(&self) -> &BranchMeetReport<R> {
        self.meet_report.get_or_init(|| isolate_meeting_points(self))
    }
}

const ISOLATION_SAMPLES: usize = 20_000;

fn isolate_meeting_points<R: Real>(rel: &ClosedRelation<R>) -> BranchMeetReport<R> {
    let tol = R::iterated_tol();
    let mut points: Vec<R> = Vec::new();
    let mut holds = true;
    let n = rel.branch_count() as u8;
    for i in 1..=n {
        for j in (i + 1)..=n {
            let g = |x: R| -> R {
                match (rel.branch(i, x), rel.branch(j, x)) {
                    (Ok(a), Ok(b)) => a - b,
                    _ => R::nan(),
                }
            };
            for iv in rel.domain().intervals() {
                let step = iv.length() / R::lit(ISOLATION_SAMPLES as f64);
                let mut zero_run = 0usize;
                let mut prev_x = iv.lo;
                let mut prev = g(prev_x);
                if prev.abs() <= tol {
                    points.push(prev_x);
                    zero_run = 1;
                }
                for k in 1..=ISOLATION_SAMPLES {
                    let x = if k == ISOLATION_SAMPLES {
                        iv.hi
                    } else {
                        iv.lo + step * R::lit(k as f64)
                    };
                    let v = g(x);
                    if v.abs() <= tol {
                        zero_run += 1;
                        if zero_run > 2 {
                            holds = false;
                        }
                        points.push(x);
                    } else {
                        zero_run = 0;
                        if prev.abs() > tol && prev.signum() != v.signum() {
                            points.push(bisect(&g, prev_x, x));
                        }
                    }
                    prev_x = x;
                    prev = v;
                }
            }
        }
    }
    points.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let merge = R::lit(1e-6);
    let mut merged: Vec<R> = Vec::new();
    for p in points {
        match merged.last_mut() {
            Some(last) if (p - *last).abs() <= merge => {
                if p.abs() < last.abs() {
                    *last = p;
                }
            }
            _ => merged.push(p),
        }
    }
    for &p in &merged {
        if !rel.is_common_fixed_point(p, R::lit(1e-6)) {
            holds = false;
        }
    }
    BranchMeetReport {
        meeting_points: merged,
        holds,
    }
}

fn bisect<R: Real>(g: &impl Fn(R) -> R, mut a: R, mut b: R) -> R {
    let mut ga = g(a);
    for _ in 0..200 {
        let m = (a + b) / R::lit(2.0);
        let gm = g(m);
        if gm == R::zero() || (b - a).abs() <= R::epsilon() {
            return m;
        }
        if gm.signum() == ga.signum() {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    (a + b) / R::lit(2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{exx3, relation_h, suspension_g};

    #[test]
    fn h_successors() {
        let rel = ClosedRelation::from_family(relation_h::<f64>().unwrap());
        assert_eq!(rel.successors(1.0).unwrap(), vec![(1, 0.5), (2, 1.0)]);
        assert_eq!(rel.successors(0.0).unwrap(), vec![(1, 0.0)]);
    }

    #[test]
    fn exx3_branches_meet_only_at_zero() {
        let rel = ClosedRelation::from_family(exx3::<f64>().unwrap());
        let rep = rel.branches_meet_only_at_fixed_points();
        assert!(rep.holds);
        assert_eq!(rep.meeting_points.len(), 1);
        assert!(rep.meeting_points[0].abs() < 1e-9);
    }

    #[test]
    fn suspension_branches_meet_at_fixed_points() {
        let rel = ClosedRelation::from_family(suspension_g::<f64>().unwrap());
        let rep = rel.branches_meet_only_at_fixed_points();
        assert!(rep.holds);
        assert_eq!(rep.meeting_points.len(), 2);
    }
}
