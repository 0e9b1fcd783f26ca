use crate::error::{Error, Result};
use crate::mahavier::TwoSidedMahavierWindow;
use crate::scalar::Real;
use crate::symbolic::{concat, Direction, FiniteWord, OneSidedWord, TwoSidedSymbolWindow};
use crate::transitivity::SkewSystem;

/// Symbol data of a leg: a two-sided window or a pair of one-sided words.
#[derive(Clone, Debug, PartialEq)]
pub enum FanSymbols {
    Window(TwoSidedSymbolWindow),
    Pair(OneSidedWord, OneSidedWord),
}

/// A canonical representative in the fan `(symbols × [0, 1]) / ∼`, where the
/// whole fibre `t = 1` collapses to the apex.
#[derive(Clone, Debug, PartialEq)]
pub enum FanPoint<R> {
    Apex,
    Leg { symbols: FanSymbols, t: R },
}

pub fn canonicalize<R: Real>(symbols: FanSymbols, t: R) -> Result<FanPoint<R>> {
    if !(R::zero() <= t && t <= R::one()) {
        return Err(Error::OutOfDomain(t.to_f64_lossy()));
    }
    Ok(if t == R::one() {
        FanPoint::Apex
    } else {
        FanPoint::Leg { symbols, t }
    })
}

impl<R: Real> FanPoint<R> {
    pub fn is_apex(&self) -> bool {
        matches!(self, FanPoint::Apex)
    }

    pub fn canonical(self) -> Result<Self> {
        match self {
            FanPoint::Apex => Ok(FanPoint::Apex),
            FanPoint::Leg { symbols, t } => canonicalize(symbols, t),
        }
    }
}

/// One step of the two-sided skew map on either symbol representation.
/// A pair `(a, b)` stands for the window with `x(k) = a(k)` for `k >= 1` and
/// `x(1 − j) = b(j)`, so the shift sends it to `(σ(a), a(1) ⊕ b)`.
fn skew_lift<R: Real>(sys: &SkewSystem<R>, symbols: &FanSymbols, t: R) -> Result<(FanSymbols, R)> {
    match symbols {
        FanSymbols::Window(w) => {
            let lead = w
                .get(1)
                .ok_or_else(|| Error::WindowTooShort("index 1 missing".into()))?;
            let t = sys.family().get(lead)?.eval(t)?;
            Ok((FanSymbols::Window(w.shift(Direction::Forward)?), t))
        }
        FanSymbols::Pair(a, b) => {
            let lead = a.get(1);
            let t = sys.family().get(lead)?.eval(t)?;
            let head = FiniteWord::new(a.alphabet(), vec![lead])?;
            Ok((FanSymbols::Pair(a.shift(), concat(&head, b)?), t))
        }
    }
}

/// `f*([p]) = [f(p)]` for the skew map. Before mapping the apex, every probe
/// representative of the `t = 1` fibre must land back in that fibre.
pub fn induced_map<R: Real>(sys: &SkewSystem<R>, p: &FanPoint<R>, probes: &[FanSymbols]) -> Result<FanPoint<R>> {
    match p {
        FanPoint::Apex => {
            for probe in probes {
                let (_, t) = skew_lift(sys, probe, R::one())?;
                if (t - R::one()).abs() > R::identity_tol() {
                    return Err(Error::NotCompatible(format!(
                        "t = 1 fibre leaves itself (image t = {t})"
                    )));
                }
            }
            Ok(FanPoint::Apex)
        }
        FanPoint::Leg { symbols, t } => {
            let (symbols, t) = skew_lift(sys, symbols, *t)?;
            let t = if (t - R::one()).abs() <= R::identity_tol() { R::one() } else { t };
            canonicalize(symbols, t)
        }
    }
}

/// The quotient of the shift space on two intervals in which every sequence
/// with all coordinates in `{0, 2}` is identified to a single point.
#[derive(Clone, Debug, PartialEq)]
pub enum CollapsedPoint<R> {
    Collapsed,
    Point(TwoSidedMahavierWindow<R>),
}

pub fn canonicalize_collapsed<R: Real>(w: &TwoSidedMahavierWindow<R>) -> CollapsedPoint<R> {
    let tol = R::identity_tol();
    let two = R::lit(2.0);
    let collapsed = w
        .values()
        .iter()
        .all(|&v| v.abs() <= tol || (v - two).abs() <= tol);
    if collapsed {
        CollapsedPoint::Collapsed
    } else {
        CollapsedPoint::Point(w.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::definicija;
    use crate::symbolic::Alphabet;

    fn window(symbols: Vec<u8>) -> FanSymbols {
        FanSymbols::Window(TwoSidedSymbolWindow::new(Alphabet::new(3).unwrap(), -2, symbols).unwrap())
    }

    #[test]
    fn apex_collapses() {
        let a = canonicalize::<f64>(window(vec![1, 2, 3, 1, 2]), 1.0).unwrap();
        let b = canonicalize::<f64>(window(vec![3, 3, 3, 3, 3]), 1.0).unwrap();
        assert_eq!(a, b);
        assert!(a.is_apex());
        let leg = canonicalize::<f64>(window(vec![1, 2, 3, 1, 2]), 0.3).unwrap();
        assert_eq!(leg.clone().canonical().unwrap(), leg);
        assert!(canonicalize::<f64>(window(vec![1, 1, 1, 1, 1]), 1.5).is_err());
    }

    #[test]
    fn induced_skew_map() {
        let sys = SkewSystem::new(definicija::<f64>().unwrap());
        let probes = vec![window(vec![1, 2, 3, 1, 2]), window(vec![2, 2, 3, 3, 1])];
        assert!(induced_map(&sys, &FanPoint::Apex, &probes).unwrap().is_apex());
        let leg = canonicalize(window(vec![1, 2, 3, 1, 2]), 0.25).unwrap();
        match induced_map(&sys, &leg, &probes).unwrap() {
            FanPoint::Leg { t, .. } => assert!((t - 0.5).abs() < 1e-15),
            FanPoint::Apex => panic!("leg mapped to apex"),
        }
    }

    #[test]
    fn pair_and_window_agree() {
        let sys = SkewSystem::new(definicija::<f64>().unwrap());
        let alpha = Alphabet::new(3).unwrap();
        let a = OneSidedWord::new(FiniteWord::new(alpha, vec![3, 1]).unwrap(), 2).unwrap();
        let b = OneSidedWord::new(FiniteWord::new(alpha, vec![2, 1]).unwrap(), 1).unwrap();
        let p = canonicalize(FanSymbols::Pair(a, b), 0.5).unwrap();
        let q = induced_map(&sys, &p, &[]).unwrap();
        let FanPoint::Leg {
            symbols: FanSymbols::Pair(a2, b2),
            t,
        } = q
        else {
            panic!()
        };
        assert!((t - 0.25).abs() < 1e-15);
        assert_eq!(a2.take(3).symbols(), &[1, 2, 2]);
        assert_eq!(b2.take(4).symbols(), &[3, 2, 1, 1]);
    }
}
