use serde::Serialize;

use crate::density::{property_l_word, search_property_l_log, DensityWitness};
use crate::error::{Error, Result};
use crate::maps::MapFamily;
use crate::scalar::Real;
use crate::symbolic::{FiniteWord, OneSidedWord, Symbol};
use crate::transitivity::target::SkewTarget;

/// Extra tolerance granted to hit checks over `eps_i`.
pub const HIT_SLACK: f64 = 1e-9;

/// A point `(w ⊕ 1^∞, x0)` whose orbit meets every target, with the step at
/// which target `i` is met.
#[derive(Clone, Debug)]
pub struct TransitivePoint<R> {
    pub prefix: FiniteWord,
    pub x0: R,
    pub hit_times: Vec<usize>,
    pub blocks: Vec<DensityWitness<R>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HitRecord {
    pub target: usize,
    pub step: usize,
    pub distance: f64,
    pub ok: bool,
}

impl<R: Real> TransitivePoint<R> {
    pub fn point(&self) -> Result<OneSidedWord> {
        OneSidedWord::new(self.prefix.clone(), 1)
    }

    /// The prefix as `(symbol, run length)` pairs.
    pub fn runs(&self) -> Vec<(Symbol, usize)> {
        let mut out: Vec<(Symbol, usize)> = Vec::new();
        for &s in self.prefix.symbols() {
            match out.last_mut() {
                Some((last, n)) if *last == s => *n += 1,
                _ => out.push((s, 1)),
            }
        }
        out
    }
}

fn check_schedule<R: Real>(targets: usize, eps: &[R]) -> Result<()> {
    if eps.len() < targets {
        return Err(Error::InvalidInput(format!(
            "{} tolerances for {targets} targets",
            eps.len()
        )));
    }
    if eps.iter().any(|&e| !(e > R::zero())) {
        return Err(Error::InvalidInput("tolerances must be positive".into()));
    }
    if eps.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::InvalidInput("tolerances must be non-increasing".into()));
    }
    Ok(())
}

/// Builds `w = Y_1 ⊕ w_1 ⊕ Y_2 ⊕ w_2 ⊕ …` where each block `Y_i` steers the
/// fibre coordinate to within `eps_i / 2` of `t_i` and `w_i` is target `i`'s
/// word, then checks every hit by direct iteration before returning.
pub fn build_transitive_point<R: Real>(
    family: &MapFamily<R>,
    targets: &[SkewTarget<R>],
    eps: &[R],
    x0: R,
    bound: u64,
) -> Result<TransitivePoint<R>> {
    check_schedule(targets.len(), eps)?;
    if !(x0 > R::zero() && x0 < R::one()) {
        return Err(Error::InvalidInput(format!("x0 = {x0} must lie in (0, 1)")));
    }
    let alphabet = family.alphabet();
    let mut prefix = FiniteWord::empty(alphabet);
    let mut u = x0.ln();
    let mut hit_times = Vec::with_capacity(targets.len());
    let mut blocks = Vec::with_capacity(targets.len());
    let half = R::lit(0.5);
    for (target, &e) in targets.iter().zip(eps) {
        if target.word.alphabet() != alphabet {
            return Err(Error::AlphabetMismatch {
                left: target.word.alphabet().size(),
                right: alphabet.size(),
            });
        }
        if !(u < R::zero()) || !u.is_finite() {
            return Err(Error::InfeasibleTarget(
                "fibre coordinate left the open unit interval".into(),
            ));
        }
        let witness = search_property_l_log(family, u, target.t, e * half, bound)?;
        let crate::density::Exponents::PropertyL { k, m, n } = witness.exponents else {
            unreachable!("property-L search returns property-L exponents");
        };
        let y = property_l_word(alphabet, k, m, n)?;
        u = family.compose_word_log(&y, u)?;
        prefix.append(&y)?;
        hit_times.push(prefix.len());
        u = family.compose_word_log(&target.word, u)?;
        prefix.append(&target.word)?;
        blocks.push(witness);
    }
    let tp = TransitivePoint {
        prefix,
        x0,
        hit_times,
        blocks,
    };
    let records = verify_transitive_point(family, &tp, targets, eps)?;
    if let Some(bad) = records.iter().find(|r| !r.ok) {
        return Err(Error::InfeasibleTarget(format!(
            "target {} missed at step {} by {}",
            bad.target, bad.step, bad.distance
        )));
    }
    Ok(tp)
}

/// Iterates the skew map letter by letter in log coordinates and checks each
/// recorded hit against `eps_i + HIT_SLACK`.
pub fn verify_transitive_point<R: Real>(
    family: &MapFamily<R>,
    tp: &TransitivePoint<R>,
    targets: &[SkewTarget<R>],
    eps: &[R],
) -> Result<Vec<HitRecord>> {
    if tp.hit_times.len() != targets.len() {
        return Err(Error::LengthMismatch(tp.hit_times.len(), targets.len()));
    }
    let point = tp.point()?;
    let slack = R::lit(HIT_SLACK);
    let mut order: Vec<usize> = (0..targets.len()).collect();
    order.sort_by_key(|&i| tp.hit_times[i]);
    let mut records = vec![None; targets.len()];
    let mut u = tp.x0.ln();
    let mut step = 0usize;
    for i in order {
        let s = tp.hit_times[i];
        while step < s {
            let symbol = point.get(step + 1);
            u = family.get(symbol)?.eval_log(u)?;
            step += 1;
        }
        let t = u.exp();
        let distance = (t - targets[i].t).abs();
        let word = targets[i].word.symbols();
        let symbols_ok = (0..word.len()).all(|j| point.get(s + j + 1) == word[j]);
        records[i] = Some(HitRecord {
            target: i,
            step: s,
            distance: distance.to_f64_lossy(),
            ok: symbols_ok && distance < eps[i] + slack,
        });
    }
    let increasing = tp.hit_times.windows(2).all(|w| w[0] < w[1]);
    Ok(records
        .into_iter()
        .map(|r| {
            let mut r = r.expect("every target visited");
            r.ok &= increasing;
            r
        })
        .collect())
}
