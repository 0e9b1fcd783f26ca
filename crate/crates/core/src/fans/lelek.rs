use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mahavier::{metric_d2, ClosedRelation, TwoSidedMahavierWindow};
use crate::maps::PiecewiseMap;
use crate::scalar::Real;
use crate::symbolic::Symbol;

const F0: Symbol = 1;
const F1: Symbol = 2;

/// Index of a coordinate equal to 1, which makes the point an end-point of the fan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EndpointCertificate {
    pub index: i64,
}

/// Highest index whose value is within `1e-12` of 1, if any. `None` is not a
/// proof that the point is not an end-point.
pub fn is_endpoint_certified<R: Real>(w: &TwoSidedMahavierWindow<R>) -> Option<EndpointCertificate> {
    let tol = R::lit(1e-12);
    (w.lo()..=w.hi())
        .rev()
        .find(|&k| w.get(k).is_some_and(|v| (v - R::one()).abs() <= tol))
        .map(|index| EndpointCertificate { index })
}

/// Smallest `m >= 1` with `Σ_{k>=m} 2^{-k} = 2^{-(m-1)} < eps / 3`.
pub fn endpoint_depth<R: Real>(eps: R) -> usize {
    let third = eps / R::lit(3.0);
    let mut m = 1usize;
    while R::lit(2.0).powi(-(m as i32 - 1)) >= third {
        m += 1;
    }
    m
}

/// Open interval in log coordinates; `lo` may be `-inf`.
#[derive(Clone, Copy, Debug)]
struct LogInterval<R> {
    lo: R,
    hi: R,
}

impl<R: Real> LogInterval<R> {
    fn around(x: R, r: R) -> Self {
        let lo = x - r;
        let hi = (x + r).min(R::one());
        Self {
            lo: if lo <= R::zero() { R::neg_infinity() } else { lo.ln() },
            hi: hi.ln(),
        }
    }

    fn meet(self, o: Self) -> Self {
        Self {
            lo: self.lo.max(o.lo),
            hi: self.hi.min(o.hi),
        }
    }

    fn contains(&self, u: R) -> bool {
        self.lo < u && u < self.hi
    }
}

/// Solves `f.eval_log(u) = v` for an increasing map by bisection on `u <= 0`.
fn invert_log<R: Real>(f: &PiecewiseMap<R>, v: R) -> Result<R> {
    let top = f.eval_log(R::zero())?;
    if v >= top {
        return Ok(R::zero());
    }
    let mut lo = v.min(-R::one());
    let mut guard = 0;
    while f.eval_log(lo)? >= v {
        lo = lo * R::lit(2.0);
        guard += 1;
        if guard > 4000 {
            return Ok(R::neg_infinity());
        }
    }
    let mut hi = R::zero();
    for _ in 0..200 {
        let mid = (lo + hi) / R::lit(2.0);
        if f.eval_log(mid)? < v {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

fn pull_back<R: Real>(f: &PiecewiseMap<R>, s: LogInterval<R>) -> Result<LogInterval<R>> {
    let lo = if s.lo == R::neg_infinity() {
        R::neg_infinity()
    } else {
        invert_log(f, s.lo)?
    };
    Ok(LogInterval {
        lo,
        hi: invert_log(f, s.hi)?,
    })
}

/// `ln f1^k(f0^h(1)) = −(3^h − 1) / 2^{k+1} · ln 2`.
fn steered_log<R: Real>(h: u64, k: u64) -> R {
    let hr = R::from_u64_lossy(h);
    let ln_c = hr * R::lit(3.0).ln() + (-(-hr * R::lit(3.0).ln()).exp()).ln_1p() + (R::LN_2() / R::lit(2.0)).ln();
    -(ln_c - R::from_u64_lossy(k) * R::LN_2()).exp()
}

/// Smallest `h`, then `k`, with `h + k <= room` and `ln f1^k(f0^h(1))` inside
/// `target`, falling back to mixed words when no such pair exists.
fn steer_from_one<R: Real>(rel: &ClosedRelation<R>, target: LogInterval<R>, room: u64) -> Result<Option<(Vec<Symbol>, Vec<R>)>> {
    let (f0, f1) = (rel.family().get(F0)?, rel.family().get(F1)?);
    for h in 1..room {
        let hr = R::from_u64_lossy(h);
        let ln_c = hr * R::lit(3.0).ln() + (-(-hr * R::lit(3.0).ln()).exp()).ln_1p() + (R::LN_2() / R::lit(2.0)).ln();
        let k_lo = if target.hi >= R::zero() {
            R::one()
        } else {
            (ln_c - (-target.hi).ln()) / R::LN_2()
        };
        let start = k_lo.floor().max(R::one()).to_u64().unwrap_or(u64::MAX);
        for k in start..start.saturating_add(3) {
            if h + k > room || !target.contains(steered_log::<R>(h, k)) {
                continue;
            }
            let mut u = R::zero();
            let mut trail = Vec::with_capacity((h + k + 1) as usize);
            trail.push(u);
            for _ in 0..h {
                u = f0.eval_log(u)?;
                trail.push(u);
            }
            for _ in 0..k {
                u = f1.eval_log(u)?;
                trail.push(u);
            }
            if target.contains(u) {
                let mut word = vec![F0; h as usize];
                word.extend(std::iter::repeat_n(F1, k as usize));
                return Ok(Some((word, trail)));
            }
        }
    }
    steer_mixed(rel, target, room)
}

/// Shortest branch word from `1` whose log-value lands in `target`, by
/// iterative deepening. A word must start with `f0` since `f1` fixes `1`.
/// Branches are assumed increasing with `f0` moving log-values down and `f1`
/// halving them.
fn steer_mixed<R: Real>(rel: &ClosedRelation<R>, target: LogInterval<R>, room: u64) -> Result<Option<(Vec<Symbol>, Vec<R>)>> {
    let (f0, f1) = (rel.family().get(F0)?, rel.family().get(F1)?);
    let mut budget = STEER_NODE_BUDGET;
    for len in 1..=room as usize {
        let mut word = vec![F0];
        let mut trail = vec![R::zero(), f0.eval_log(R::zero())?];
        if dfs(f0, f1, target, len, &mut word, &mut trail, &mut budget)? {
            return Ok(Some((word, trail)));
        }
        if budget == 0 {
            break;
        }
    }
    Ok(None)
}

const STEER_NODE_BUDGET: u64 = 4_000_000;

fn dfs<R: Real>(
    f0: &PiecewiseMap<R>,
    f1: &PiecewiseMap<R>,
    target: LogInterval<R>,
    len: usize,
    word: &mut Vec<Symbol>,
    trail: &mut Vec<R>,
    budget: &mut u64,
) -> Result<bool> {
    let u = *trail.last().expect("nonempty trail");
    let left = len - word.len();
    if left == 0 {
        return Ok(target.contains(u));
    }
    if *budget == 0 || u * R::lit(0.5).powi(left as i32) <= target.lo {
        return Ok(false);
    }
    *budget -= 1;
    for (b, f) in [(F1, f1), (F0, f0)] {
        word.push(b);
        trail.push(f.eval_log(u)?);
        if dfs(f0, f1, target, len, word, trail, budget)? {
            return Ok(true);
        }
        word.pop();
        trail.pop();
    }
    Ok(false)
}

/// A certified end-point within `eps` of `x` in the truncated two-sided metric.
///
/// The result equals 1 at index `−m − h − k`, runs `f0` `h` times and then
/// `f1` `k` times (or a mixed word of the same role) to reach index `−m`, follows the choices of `x` on
/// `[−m, m]`, and continues with `f0`. The target neighbourhood of `x(−m)` is
/// shrunk until the truncated distance is below `eps`.
pub fn lelek_endpoint_near<R: Real>(
    rel: &ClosedRelation<R>,
    x: &TwoSidedMahavierWindow<R>,
    eps: R,
) -> Result<(TwoSidedMahavierWindow<R>, EndpointCertificate)> {
    if rel.branch_count() != 2 {
        return Err(Error::NotApplicable("end-points are built on a two-branch relation".into()));
    }
    if !(eps > R::zero()) {
        return Err(Error::InvalidInput(format!("eps = {eps} must be positive")));
    }
    if let Some(cert) = is_endpoint_certified(x) {
        return Ok((x.clone(), cert));
    }
    let m = endpoint_depth(eps) as i64;
    if x.hi() < m || -x.lo() < m + 2 {
        return Err(Error::WindowTooShort(format!(
            "window [{}, {}] cannot hold depth {m}",
            x.lo(),
            x.hi()
        )));
    }
    let room = (-m - x.lo()) as u64;
    let weight_total = R::from_u64_lossy((2 * m + 1) as u64);
    let third = eps / R::lit(3.0);
    let mut best = R::infinity();
    let mut scale = R::lit(8.0);
    for _ in 0..40 {
        let radius = |k: i64| scale * third * R::lit(2.0).powi(k.abs() as i32) / weight_total;
        let mut v = LogInterval::around(x.get(m).expect("in window"), radius(m));
        for k in (-m..m).rev() {
            let g = rel.family().get(x.choice(k).expect("in window"))?;
            v = LogInterval::around(x.get(k).expect("in window"), radius(k)).meet(pull_back(g, v)?);
        }
        if let Some((word, trail)) = steer_from_one(rel, v, room)? {
            let e = assemble(rel, x, m, &word, &trail)?;
            let d = metric_d2(x, &e, rel.diameter())?.value;
            if d < eps {
                let cert = EndpointCertificate {
                    index: -m - word.len() as i64,
                };
                if e.get(cert.index).is_some_and(|v| v == R::one()) {
                    return Ok((e, cert));
                }
            }
            best = best.min(d);
        }
        scale = scale / R::lit(2.0);
    }
    Err(Error::WitnessNotFound {
        bound: room,
        best_error: best.to_f64_lossy(),
    })
}

fn assemble<R: Real>(
    rel: &ClosedRelation<R>,
    x: &TwoSidedMahavierWindow<R>,
    m: i64,
    word: &[Symbol],
    trail: &[R],
) -> Result<TwoSidedMahavierWindow<R>> {
    let start = -m - word.len() as i64;
    let mut logs = Vec::with_capacity((x.hi() - x.lo() + 1) as usize);
    let mut choices = Vec::with_capacity(logs.capacity());
    for _ in x.lo()..start {
        logs.push(R::zero());
        choices.push(F1);
    }
    logs.extend_from_slice(trail);
    choices.extend_from_slice(word);
    let mut u = *trail.last().expect("nonempty trail");
    for idx in -m..x.hi() {
        let b = if idx < m { x.choice(idx).expect("in window") } else { F0 };
        u = rel.family().get(b)?.eval_log(u)?;
        logs.push(u);
        choices.push(b);
    }
    let values = logs.into_iter().map(R::exp).collect();
    TwoSidedMahavierWindow::new(rel, x.lo(), values, choices)
}

/// A seeded random window `[lo, hi]` of the two-sided product: `x(0)` uniform
/// in `(0, 1]`, forward branches uniform, backward steps through `f0^{-1}` only
/// when the value is at most `1/2`.
pub fn random_window<R: Real, G: Rng>(rel: &ClosedRelation<R>, lo: i64, hi: i64, rng: &mut G) -> Result<TwoSidedMahavierWindow<R>> {
    if lo > 0 || hi < 1 {
        return Err(Error::WindowTooShort(format!("[{lo}, {hi}]")));
    }
    let x0 = R::lit(1.0 - rng.gen::<f64>());
    let mut back_vals = Vec::new();
    let mut back_choices = Vec::new();
    let mut v = x0;
    for _ in lo..0 {
        let b = if v <= R::lit(0.5) && rng.gen_bool(0.5) { F0 } else { F1 };
        v = rel.family().get(b)?.invert(v)?;
        back_vals.push(v);
        back_choices.push(b);
    }
    back_vals.reverse();
    back_choices.reverse();
    let mut values = back_vals;
    let mut choices = back_choices;
    values.push(x0);
    let mut v = x0;
    for _ in 0..hi {
        let b = if rng.gen_bool(0.5) { F0 } else { F1 };
        v = rel.branch(b, v)?;
        values.push(v);
        choices.push(b);
    }
    TwoSidedMahavierWindow::new(rel, lo, values, choices)
}

/// The window through `t` at index 0 following `choices` (for `m(lo), …, m(hi−1)`).
/// Backward coordinates use branch inverses and fail outside the image.
pub fn leg_window<R: Real>(rel: &ClosedRelation<R>, lo: i64, choices: &[Symbol], t: R) -> Result<TwoSidedMahavierWindow<R>> {
    let neg = (-lo) as usize;
    if neg > choices.len() {
        return Err(Error::WindowTooShort(format!("lo = {lo} beyond choices")));
    }
    let mut values = vec![R::zero(); choices.len() + 1];
    values[neg] = t;
    for i in (0..neg).rev() {
        values[i] = rel.family().get(choices[i])?.invert(values[i + 1])?;
    }
    for i in neg..choices.len() {
        values[i + 1] = rel.branch(choices[i], values[i])?;
    }
    TwoSidedMahavierWindow::new(rel, lo, values, choices.to_vec())
}
