use crate::density::{search_gabi, DensityWitness, Exponents};
use crate::error::{Error, Result};
use crate::mahavier::{ClosedRelation, MahavierWord};
use crate::maps::PiecewiseMap;
use crate::scalar::Real;
use crate::symbolic::{enumerate_words, Alphabet, FiniteWord, Symbol};
use crate::transitivity::target::{diagonal_pair, dyadic, word_at, CylinderTarget};

/// Steering runs `f0^h` then `f1^k` between consecutive targets.
const F0: Symbol = 1;
const F1: Symbol = 2;

/// Words `x_1, x_2, …` whose leading coordinates sit in successive targets,
/// joined end to start: coordinate `ℓ_j` of `x_j` is coordinate 1 of `x_{j+1}`.
#[derive(Clone, Debug)]
pub struct SigmaChain<R> {
    /// The first `ℓ_j` coordinates of each `x_j`.
    pub points: Vec<MahavierWord<R>>,
    pub lengths: Vec<usize>,
    pub depths: Vec<usize>,
    pub steering: Vec<DensityWitness<R>>,
}

impl<R: Real> SigmaChain<R> {
    /// `s_k = Σ_{j<k} (ℓ_j − 1)`: shifting the stitched word `s_k` times puts
    /// `x_k` in front.
    pub fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.lengths.len());
        let mut s = 0;
        for &l in &self.lengths {
            out.push(s);
            s += l - 1;
        }
        out
    }

    /// `x_1 ⋆ x_2 ⋆ …`.
    pub fn stitched(&self) -> Result<MahavierWord<R>> {
        let mut it = self.points.iter();
        let first = it
            .next()
            .ok_or_else(|| Error::TooShort("empty chain".into()))?
            .clone();
        it.try_fold(first, |acc, w| acc.star(w))
    }
}

#[derive(Clone, Copy, Debug)]
struct Open<R> {
    lo: R,
    hi: R,
}

impl<R: Real> Open<R> {
    fn is_empty(&self) -> bool {
        !(self.lo < self.hi)
    }

    fn meet(self, other: Self) -> Self {
        Open {
            lo: self.lo.max(other.lo),
            hi: self.hi.min(other.hi),
        }
    }

    fn contains(&self, x: R) -> bool {
        self.lo < x && x < self.hi
    }

    fn mid(&self) -> R {
        (self.lo + self.hi) / R::lit(2.0)
    }
}

fn increasing_on<R: Real>(f: &PiecewiseMap<R>) -> Result<(R, R)> {
    let (a, b) = (f.domain().min(), f.domain().max());
    let (fa, fb) = (f.eval(a)?, f.eval(b)?);
    if !(f.is_injective() && fa < fb) {
        return Err(Error::NotApplicable("branches must be increasing".into()));
    }
    Ok((fa, fb))
}

fn image<R: Real>(f: &PiecewiseMap<R>, s: Open<R>) -> Result<Open<R>> {
    Ok(Open {
        lo: f.eval(s.lo)?,
        hi: f.eval(s.hi)?,
    })
}

fn preimage<R: Real>(f: &PiecewiseMap<R>, s: Open<R>) -> Result<Open<R>> {
    let (fa, fb) = increasing_on(f)?;
    let (a, b) = (f.domain().min(), f.domain().max());
    let empty = Open { lo: b, hi: a };
    if s.hi <= fa || s.lo >= fb {
        return Ok(empty);
    }
    let lo = if s.lo < fa { a } else { f.invert(s.lo)? };
    let hi = if s.hi > fb { b } else { f.invert(s.hi)? };
    Ok(Open { lo, hi })
}

/// Per-target data after feasibility: branch word and the set `V_1` of admissible starts.
struct Resolved<R> {
    branches: FiniteWord,
    start: Open<R>,
    fixed: Option<R>,
}

fn boxes_of<R: Real>(rel: &ClosedRelation<R>, target: &CylinderTarget) -> Result<Vec<Open<R>>> {
    target.validate()?;
    let dom = Open {
        lo: rel.domain().min(),
        hi: rel.domain().max(),
    };
    let mut boxes: Vec<Open<R>> = target
        .boxes
        .iter()
        .map(|&[lo, hi]| {
            Open {
                lo: R::lit(lo),
                hi: R::lit(hi),
            }
            .meet(dom)
        })
        .collect();
    let depth = boxes.len().max(target.word.as_ref().map_or(0, |w| w.len() + 1));
    while boxes.len() < depth {
        boxes.push(dom);
    }
    Ok(boxes)
}

/// Finds the lexicographically first branch word whose forward image of the
/// boxes is nonempty, then pulls the last box back to get `V_1`.
fn resolve<R: Real>(rel: &ClosedRelation<R>, target: &CylinderTarget) -> Result<Resolved<R>> {
    let boxes = boxes_of(rel, target)?;
    let raw: Vec<(R, R)> = target.boxes.iter().map(|&[a, b]| (R::lit(a), R::lit(b))).collect();
    let fixed = fixed_start(rel, &raw, target.word.as_deref());
    let alphabet = rel.alphabet();
    let required = target.word.clone().unwrap_or_default();
    for word in enumerate_words(alphabet, boxes.len() - 1) {
        if !word.symbols().starts_with(&required) {
            continue;
        }
        let mut forward = vec![boxes[0]];
        let mut ok = !boxes[0].is_empty();
        for (i, &b) in word.symbols().iter().enumerate() {
            if !ok {
                break;
            }
            let next = image(rel.family().get(b)?, forward[i])?.meet(boxes[i + 1]);
            ok = !next.is_empty();
            forward.push(next);
        }
        if !ok {
            continue;
        }
        let mut v = *forward.last().expect("nonempty");
        for i in (0..word.len()).rev() {
            let pre = preimage(rel.family().get(word.symbols()[i])?, v)?;
            v = forward[i].meet(pre);
        }
        if v.is_empty() {
            continue;
        }
        return Ok(Resolved {
            branches: word,
            start: v,
            fixed,
        });
    }
    Err(Error::InfeasibleTarget(format!(
        "no branch word reaches the boxes {:?}",
        target.boxes
    )))
}

/// A positive point fixed by some branch whose constant word lies in every box.
fn fixed_start<R: Real>(rel: &ClosedRelation<R>, boxes: &[(R, R)], word: Option<&[Symbol]>) -> Option<R> {
    let tol = R::identity_tol();
    [rel.domain().max(), rel.domain().min()]
        .into_iter()
        .filter(|&a| a > R::zero())
        .find_map(|a| {
            let fixed_by = rel
                .alphabet()
                .symbols()
                .find(|&s| rel.branch(s, a).is_ok_and(|v| (v - a).abs() <= tol))?;
            let word_ok = word.is_none_or(|w| w.iter().all(|&s| s == fixed_by));
            let boxes_ok = boxes.iter().all(|&(lo, hi)| lo < a && a < hi);
            (word_ok && boxes_ok && !boxes.is_empty()).then_some(a)
        })
}

fn require_two_branches<R: Real>(rel: &ClosedRelation<R>) -> Result<()> {
    if rel.branch_count() != 2 {
        return Err(Error::NotApplicable("the chain steers with exactly two branches".into()));
    }
    Ok(())
}

/// Values `f0(y), …, f0^h(y), f1(f0^h(y)), …, f1^k(f0^h(y))`, computed in log
/// coordinates.
fn steer_values<R: Real>(rel: &ClosedRelation<R>, y: R, h: u64, k: u64) -> Result<Vec<R>> {
    let (f0, f1) = (rel.family().get(F0)?, rel.family().get(F1)?);
    let mut u = y.ln();
    let mut out = Vec::with_capacity((h + k) as usize);
    for _ in 0..h {
        u = f0.eval_log(u)?;
        out.push(u.exp());
    }
    for _ in 0..k {
        u = f1.eval_log(u)?;
        out.push(u.exp());
    }
    Ok(out)
}

/// Builds a chain through the targets on the relation `H`: each `x_j` starts
/// in the admissible set of target `j`, follows its branch word, and is then
/// steered into the admissible set of target `j + 1` by `f0^h` then `f1^k`.
pub fn build_sigma_chain<R: Real>(rel: &ClosedRelation<R>, targets: &[CylinderTarget], bound: u64) -> Result<SigmaChain<R>> {
    require_two_branches(rel)?;
    if targets.is_empty() {
        return Err(Error::InvalidInput("no targets".into()));
    }
    let resolved: Vec<Resolved<R>> = targets.iter().map(|t| resolve(rel, t)).collect::<Result<_>>()?;
    let mut chain = SigmaChain {
        points: Vec::new(),
        lengths: Vec::new(),
        depths: Vec::new(),
        steering: Vec::new(),
    };
    let first = &resolved[0];
    let mut start = first.fixed.unwrap_or_else(|| first.start.mid());
    for (j, r) in resolved.iter().enumerate() {
        let x = MahavierWord::follow(rel, start, &r.branches)?;
        let y = x.last();
        let (h, k, next) = match resolved.get(j + 1) {
            Some(next) => {
                let v = next.start;
                let eps = (v.hi - v.lo) * R::lit(0.45);
                let w = search_gabi(y, v.mid(), eps, bound)?;
                let Exponents::Gabi { h, k } = w.exponents else {
                    unreachable!("gabi search returns gabi exponents");
                };
                chain.steering.push(w);
                (h, k, Some(v))
            }
            None => (1, 1, None),
        };
        let tail = steer_values(rel, y, h, k)?;
        let landing = *tail.last().expect("h + k >= 2");
        if let Some(v) = next {
            if !v.contains(landing) {
                return Err(Error::InfeasibleTarget(format!(
                    "steering landed at {landing} outside ({}, {})",
                    v.lo, v.hi
                )));
            }
        }
        let mut values = x.values().to_vec();
        values.extend_from_slice(&tail);
        let mut choices = r.branches.clone();
        choices.push_run(F0, h as usize)?;
        choices.push_run(F1, k as usize)?;
        let word = MahavierWord::new(rel, values, choices)?;
        chain.depths.push(x.len());
        chain.lengths.push(word.len());
        chain.points.push(word);
        start = landing;
    }
    Ok(chain)
}

/// Checks the chain invariants, then that `σ^{s_k}` of the stitched word lands in target `k`.
pub fn verify_sigma_chain<R: Real>(rel: &ClosedRelation<R>, chain: &SigmaChain<R>, targets: &[CylinderTarget]) -> Result<Vec<bool>> {
    if chain.points.len() != targets.len() {
        return Err(Error::LengthMismatch(chain.points.len(), targets.len()));
    }
    let tol = R::iterated_tol();
    for (j, w) in chain.points.iter().enumerate() {
        if chain.lengths[j] != w.len() || chain.lengths[j] <= chain.depths[j] {
            return Ok(vec![false; targets.len()]);
        }
        if let Some(next) = chain.points.get(j + 1) {
            if (w.last() - next.first()).abs() > tol {
                return Ok(vec![false; targets.len()]);
            }
        }
    }
    let stitched = chain.stitched()?;
    let rechecked = MahavierWord::new(rel, stitched.values().to_vec(), stitched.choices().clone());
    if rechecked.is_err() {
        return Ok(vec![false; targets.len()]);
    }
    Ok(chain
        .offsets()
        .iter()
        .zip(targets)
        .map(|(&s, t)| {
            let values: Vec<f64> = stitched.values()[s..].iter().map(|v| v.to_f64_lossy()).collect();
            let symbols = &stitched.choices().symbols()[s..];
            t.hit_distance(Some(symbols), &values).is_some()
        })
        .collect())
}

/// The first `count` targets of a dense enumeration of cylinders for a
/// two-branch relation on `[0, 1]`: target `i` pairs a branch word with a
/// dyadic start interval and boxes the forward images, padded by 5%.
pub fn auto_box_targets<R: Real>(rel: &ClosedRelation<R>, count: usize) -> Result<Vec<CylinderTarget>> {
    let alphabet: Alphabet = rel.alphabet();
    (0..count)
        .map(|i| {
            let (wi, di) = diagonal_pair(i);
            let word = if wi == 0 {
                FiniteWord::empty(alphabet)
            } else {
                word_at(alphabet, wi - 1)
            };
            let (num, level) = dyadic(di);
            let c = num as f64 / f64::powi(2.0, level as i32);
            let hw = f64::powi(2.0, -(level as i32) - 1);
            let mut cur = (R::lit(c - hw), R::lit(c + hw));
            let mut boxes = vec![cur];
            for &b in word.symbols() {
                let f = rel.family().get(b)?;
                cur = (f.eval(cur.0)?, f.eval(cur.1)?);
                boxes.push(cur);
            }
            let boxes = boxes
                .into_iter()
                .map(|(lo, hi)| {
                    let (lo, hi) = (lo.to_f64_lossy(), hi.to_f64_lossy());
                    let pad = 0.05 * (hi - lo);
                    [lo - pad, hi + pad]
                })
                .collect();
            Ok(CylinderTarget {
                word: (!word.is_empty()).then(|| word.symbols().to_vec()),
                boxes,
                eps: None,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::relation_h;

    fn h() -> ClosedRelation<f64> {
        ClosedRelation::from_family(relation_h().unwrap())
    }

    fn boxed(lo: f64, hi: f64) -> CylinderTarget {
        CylinderTarget {
            word: None,
            boxes: vec![[lo, hi]],
            eps: None,
        }
    }

    #[test]
    fn two_targets() {
        let targets = [boxed(0.9, 1.0), boxed(0.4, 0.6)];
        let chain = build_sigma_chain(&h(), &targets, 1 << 20).unwrap();
        let l1 = chain.lengths[0];
        let v = chain.points[0].get(l1).unwrap();
        assert!(0.4 < v && v < 0.6);
        assert!(verify_sigma_chain(&h(), &chain, &targets).unwrap().iter().all(|&b| b));
    }

    #[test]
    fn constant_one() {
        let chain = build_sigma_chain(&h(), &[boxed(0.9, 1.1)], 1 << 20).unwrap();
        assert_eq!(chain.points.len(), 1);
        assert_eq!(chain.points[0].first(), 1.0);
    }

    #[test]
    fn out_of_range() {
        assert!(matches!(
            build_sigma_chain(&h(), &[boxed(2.0, 3.0)], 1 << 20),
            Err(Error::InfeasibleTarget(_))
        ));
    }

    #[test]
    fn auto_targets_chain() {
        let targets = auto_box_targets(&h(), 10).unwrap();
        let chain = build_sigma_chain(&h(), &targets, 1 << 30).unwrap();
        let ok = verify_sigma_chain(&h(), &chain, &targets).unwrap();
        assert!(ok.iter().all(|&b| b), "{ok:?}");
    }
}
