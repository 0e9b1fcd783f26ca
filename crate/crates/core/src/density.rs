//! Witness searches for the density statements behind the transitivity results.
//!
//! Every search scans its outer exponent upward. For each outer value it solves
//! for the interval of admissible inner exponents in log space and tries the
//! smallest one. It re-evaluates the candidate before accepting it. The first
//! candidate with `|value − z| < eps` is returned, so enlarging the bound never
//! changes an existing answer.

use serde::Serialize;

use crate::cfrac::semiconvergents;
use crate::error::{Error, Result};
use crate::maps::{h_iterate_closed_form, MapFamily};
use crate::scalar::Real;
use crate::symbolic::{Alphabet, FiniteWord};

/// Cap on `h` for [`search_gabi`].
pub const GABI_H_CAP: u64 = 2000;
const MAX_SHIFT: u64 = 62;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Exponents {
    Pow23 { m: u64, n: u64 },
    HalfPow { k: u64, n: u64 },
    PropertyL { k: u64, m: u64, n: u64 },
    Gabi { h: u64, k: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityWitness<R> {
    pub exponents: Exponents,
    pub achieved: R,
    pub error: R,
    pub evaluations: u64,
}

impl<R: Real + Serialize> DensityWitness<R> {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("witness serializes")
    }
}

/// Acceptable band for `−ln v` given `|v − z| < eps` and `0 < v <= 1`.
#[derive(Clone, Copy, Debug)]
struct LogBand<R> {
    mag_lo: R,
    mag_hi: R,
}

impl<R: Real> LogBand<R> {
    fn new(z: R, eps: R) -> Self {
        let upper = z + eps;
        let lower = z - eps;
        let mag_lo = if upper >= R::one() { R::zero() } else { -upper.ln() };
        let mag_hi = if lower <= R::zero() { R::infinity() } else { -lower.ln() };
        Self { mag_lo, mag_hi }
    }

    fn scaled(self, s: R) -> Self {
        Self {
            mag_lo: self.mag_lo * s,
            mag_hi: self.mag_hi * s,
        }
    }
}

/// Tracks evaluations and the best error seen.
struct Tally<R> {
    evaluations: u64,
    best: R,
}

impl<R: Real> Tally<R> {
    fn new() -> Self {
        Self {
            evaluations: 0,
            best: R::infinity(),
        }
    }

    fn record(&mut self, err: R) {
        self.evaluations += 1;
        if err < self.best {
            self.best = err;
        }
    }

    fn not_found(&self, bound: u64) -> Error {
        Error::WitnessNotFound {
            bound,
            best_error: self.best.to_f64_lossy(),
        }
    }
}

/// Candidate inner exponents for the open real interval `(lo, hi)`, smallest first.
fn inner_candidates<R: Real>(lo: R, hi: R, max: u64) -> impl Iterator<Item = u64> {
    let start = if lo.is_nan() || hi.is_nan() || hi < R::one() {
        u64::MAX
    } else if lo < R::one() {
        1
    } else {
        lo.floor().to_u64().unwrap_or(u64::MAX)
    };
    (0..3u64)
        .filter_map(move |d| start.checked_add(d))
        .filter(move |&j| j >= 1 && j <= max)
}

fn pow2<R: Real>(e: u64) -> R {
    R::lit(2.0).powf(R::from_u64_lossy(e))
}

fn check_unit_open(name: &str, x: f64, lo_closed: bool, hi: f64) -> Result<()> {
    let ok = if lo_closed { x >= 0.0 } else { x > 0.0 };
    if ok && x <= hi && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} = {x} out of range")))
    }
}

fn check_eps<R: Real>(eps: R) -> Result<()> {
    if eps > R::zero() && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("eps = {eps} must be positive")))
    }
}

// ===========================================================================
// x^{2^m / 3^n}
// ===========================================================================

/// `x^{2^m/3^n}` evaluated directly when the exponent is representable.
pub fn pow23_value<R: Real>(x: R, m: u64, n: u64) -> R {
    if m <= 900 && n <= 560 {
        let e = pow2::<R>(m) / R::lit(3.0).powf(R::from_u64_lossy(n));
        if e.is_finite() && e > R::zero() {
            return x.powf(e);
        }
    }
    (x.ln() * (R::from_u64_lossy(m) * R::LN_2() - R::from_u64_lossy(n) * R::lit(3.0).ln()).exp()).exp()
}

fn pow23_inner_range<R: Real>(ln_abs_ln_x: R, band: LogBand<R>, n: u64) -> (R, R) {
    let base = ln_abs_ln_x - R::from_u64_lossy(n) * R::lit(3.0).ln();
    (
        (band.mag_lo.ln() - base) / R::LN_2(),
        (band.mag_hi.ln() - base) / R::LN_2(),
    )
}

fn pow23_at<R: Real>(x: R, z: R, eps: R, n: u64, bound: u64, tally: &mut Tally<R>) -> Option<DensityWitness<R>> {
    let band = LogBand::new(z, eps);
    let (lo, hi) = pow23_inner_range(x.ln().abs().ln(), band, n);
    for m in inner_candidates(lo, hi, bound) {
        let v = pow23_value(x, m, n);
        let err = (v - z).abs();
        tally.record(err);
        if err < eps {
            return Some(DensityWitness {
                exponents: Exponents::Pow23 { m, n },
                achieved: v,
                error: err,
                evaluations: tally.evaluations,
            });
        }
    }
    None
}

/// Finds `m, n ∈ [1, bound]` with `|x^{2^m/3^n} − z| < eps`, scanning `n` upward.
pub fn search_pow23<R: Real>(x: R, z: R, eps: R, bound: u64) -> Result<DensityWitness<R>> {
    check_unit_open("x", x.to_f64_lossy(), false, 1.0 - f64::EPSILON)?;
    check_unit_open("z", z.to_f64_lossy(), true, 1.0)?;
    check_eps(eps)?;
    let mut tally = Tally::new();
    for n in 1..=bound {
        if let Some(w) = pow23_at(x, z, eps, n, bound, &mut tally) {
            return Ok(w);
        }
    }
    Err(tally.not_found(bound))
}

/// [`search_pow23`] accelerated by steering `n` with semiconvergents of
/// `log2 3`; falls back to the full scan when steering stalls.
pub fn search_pow23_fast<R: Real>(x: R, z: R, eps: R, bound: u64) -> Result<DensityWitness<R>> {
    check_unit_open("x", x.to_f64_lossy(), false, 1.0 - f64::EPSILON)?;
    check_unit_open("z", z.to_f64_lossy(), true, 1.0)?;
    check_eps(eps)?;
    let band = LogBand::new(z, eps);
    let ln_abs = x.ln().abs().ln();
    let mut tally = Tally::new();
    let found = steer(
        bound,
        |n| pow23_inner_range(ln_abs, band, n).0,
        |n, tally: &mut Tally<R>| pow23_at(x, z, eps, n, bound, tally),
        &mut tally,
    );
    match found {
        Some(w) => Ok(w),
        None => search_pow23(x, z, eps, bound).map(|mut w| {
            w.evaluations += tally.evaluations;
            w
        }),
    }
}

/// Greedy descent on the fractional part of `lower(i)`: adds the
/// semiconvergent denominator whose drift best reduces the distance from
/// `lower(i)` up to the next integer.
fn steer<R: Real, W>(
    outer_max: u64,
    lower: impl Fn(u64) -> R,
    mut check: impl FnMut(u64, &mut Tally<R>) -> Option<W>,
    tally: &mut Tally<R>,
) -> Option<W> {
    let theta = R::lit(3.0).ln() / R::LN_2();
    let mut steps: Vec<(u64, R)> = semiconvergents(theta, outer_max)
        .into_iter()
        .map(|(_, q)| {
            let qt = R::from_u64_lossy(q) * theta;
            (q, qt - qt.floor())
        })
        .collect();
    steps.sort_by(|a, b| b.1.partial_cmp(&a.1).expect("finite"));
    let mut i = 1u64;
    for _ in 0..4096 {
        if i > outer_max {
            return None;
        }
        if let Some(w) = check(i, tally) {
            return Some(w);
        }
        let l = lower(i);
        if !l.is_finite() {
            return None;
        }
        let gap = l.ceil() - l;
        let step = steps
            .iter()
            .find(|&&(q, d)| d <= gap && i + q <= outer_max)
            .or_else(|| steps.iter().rev().find(|&&(q, _)| i + q <= outer_max))?;
        i += step.0;
    }
    None
}

// ===========================================================================
// (1/2)^{k/2^n} · x^{1/2^n}
// ===========================================================================

/// `(1/2)^{k/2^n} · x^{1/2^n}`.
pub fn half_pow_value<R: Real>(x: R, k: u64, n: u64) -> R {
    let s = pow2::<R>(n).recip();
    R::lit(0.5).powf(R::from_u64_lossy(k) * s) * x.powf(s)
}

/// The per-`n` choice of `k` from the constructive argument: for `z = 0` the
/// least `k` with `(1/2)^{k/2^n} <= 2^{-n}`, namely `n·2^n`; otherwise the `k`
/// minimizing `|(1/2)^{k/2^n} − z|`.
pub fn half_pow_proof_choice<R: Real>(z: R, n: u64) -> Option<u64> {
    if n > MAX_SHIFT - 6 {
        return None;
    }
    if z == R::zero() {
        return n.checked_mul(1u64 << n);
    }
    let real = pow2::<R>(n) * (-z.log2());
    let base = real.floor().to_u64()?;
    let candidates = [base.saturating_sub(1), base, base + 1, base + 2];
    candidates
        .into_iter()
        .filter(|&k| k >= 1)
        .min_by(|&a, &b| {
            let ea = (R::lit(0.5).powf(R::from_u64_lossy(a) / pow2(n)) - z).abs();
            let eb = (R::lit(0.5).powf(R::from_u64_lossy(b) / pow2(n)) - z).abs();
            ea.partial_cmp(&eb).expect("finite")
        })
}

/// Scan over `n` for `−ln((1/2)^{k/2^n} y^{1/2^n}) = 2^{-n}(k ln 2 + lny_abs)`
/// landing in the band.
fn half_pow_scan<R: Real>(
    lny_abs: R,
    band: LogBand<R>,
    bound: u64,
    tally: &mut Tally<R>,
    mut accept: impl FnMut(u64, u64, &mut Tally<R>) -> bool,
) -> Option<(u64, u64)> {
    for n in 1..=bound.min(MAX_SHIFT) {
        let p = pow2::<R>(n);
        let lo = (p * band.mag_lo - lny_abs) / R::LN_2();
        let hi = (p * band.mag_hi - lny_abs) / R::LN_2();
        for k in inner_candidates(lo, hi, 1u64 << MAX_SHIFT) {
            if accept(k, n, tally) {
                return Some((k, n));
            }
        }
    }
    None
}

/// Finds `k, n >= 1` with `|(1/2)^{k/2^n} x^{1/2^n} − z| < eps` for
/// `x ∈ (0, 2/3]`, `z ∈ [0, 2/3]`. For `z = 0` the constructive choice
/// `k = n·2^n` is used.
pub fn search_half_pow<R: Real>(x: R, z: R, eps: R, bound: u64) -> Result<DensityWitness<R>> {
    let two_thirds = 2.0 / 3.0 + 1e-12;
    check_unit_open("x", x.to_f64_lossy(), false, two_thirds)?;
    check_unit_open("z", z.to_f64_lossy(), true, two_thirds)?;
    check_eps(eps)?;
    let mut tally = Tally::new();
    let eval = |k: u64, n: u64, tally: &mut Tally<R>| {
        let v = half_pow_value(x, k, n);
        let err = (v - z).abs();
        tally.record(err);
        (v, err)
    };
    if z == R::zero() {
        for n in 1..=bound.min(MAX_SHIFT - 6) {
            let k = half_pow_proof_choice(z, n).expect("within shift cap");
            let (v, err) = eval(k, n, &mut tally);
            if err < eps {
                return Ok(DensityWitness {
                    exponents: Exponents::HalfPow { k, n },
                    achieved: v,
                    error: err,
                    evaluations: tally.evaluations,
                });
            }
        }
        return Err(tally.not_found(bound));
    }
    let band = LogBand::new(z, eps);
    let mut hit = None;
    let found = half_pow_scan(x.ln().abs(), band, bound, &mut tally, |k, n, tally| {
        let (v, err) = eval(k, n, tally);
        if err < eps {
            hit = Some((v, err));
            true
        } else {
            false
        }
    });
    match (found, hit) {
        (Some((k, n)), Some((v, err))) => Ok(DensityWitness {
            exponents: Exponents::HalfPow { k, n },
            achieved: v,
            error: err,
            evaluations: tally.evaluations,
        }),
        _ => Err(tally.not_found(bound)),
    }
}

// ===========================================================================
// f1^{m+n}(f2^k(f3^m(x))) for the three-map family
// ===========================================================================

/// The block `(3^m, 2^k, 1^{m+n})`: `f3` acts `m` times, then `f2` `k` times,
/// then `f1` `m + n` times.
pub fn property_l_word(alphabet: Alphabet, k: u64, m: u64, n: u64) -> Result<FiniteWord> {
    if alphabet.size() < 3 {
        return Err(Error::InvalidInput("three-letter alphabet required".into()));
    }
    let mut w = FiniteWord::empty(alphabet);
    w.push_run(3, m as usize)?;
    w.push_run(2, k as usize)?;
    w.push_run(1, (m + n) as usize)?;
    Ok(w)
}

/// Direct letter-by-letter evaluation of the block in log coordinates, with
/// runs applied one map at a time.
fn property_l_direct<R: Real>(family: &MapFamily<R>, ln_x: R, k: u64, m: u64, n: u64) -> Result<R> {
    let (f1, f2, f3) = (family.get(1)?, family.get(2)?, family.get(3)?);
    let mut u = ln_x;
    for _ in 0..m {
        u = f3.eval_log(u)?;
    }
    for _ in 0..k {
        u = f2.eval_log(u)?;
    }
    for _ in 0..(m + n) {
        u = f1.eval_log(u)?;
    }
    Ok(u)
}

/// Finds `k, m, n >= 1` with `|f1^{m+n}(f2^k(f3^m(x))) − z| < eps` for
/// `x ∈ (0, 1)`, `z ∈ [0, 1]`, verified by iterating the family's maps.
pub fn search_property_l<R: Real>(family: &MapFamily<R>, x: R, z: R, eps: R, bound: u64) -> Result<DensityWitness<R>> {
    check_unit_open("x", x.to_f64_lossy(), false, 1.0 - f64::EPSILON)?;
    search_property_l_log(family, x.ln(), z, eps, bound)
}

/// [`search_property_l`] with the start given as `ln x`, for starts too close
/// to 0 or 1 to carry in plain coordinates.
pub fn search_property_l_log<R: Real>(family: &MapFamily<R>, ln_x: R, z: R, eps: R, bound: u64) -> Result<DensityWitness<R>> {
    if !(ln_x < R::zero()) || !ln_x.is_finite() {
        return Err(Error::InvalidInput(format!("ln x = {ln_x} must be negative and finite")));
    }
    check_unit_open("z", z.to_f64_lossy(), true, 1.0)?;
    check_eps(eps)?;
    let mut tally = Tally::new();
    let verify = |k: u64, m: u64, n: u64, tally: &mut Tally<R>| -> Option<DensityWitness<R>> {
        let u = property_l_direct(family, ln_x, k, m, n).ok()?;
        let v = u.exp();
        let err = (v - z).abs();
        tally.record(err);
        (err < eps).then_some(DensityWitness {
            exponents: Exponents::PropertyL { k, m, n },
            achieved: v,
            error: err,
            evaluations: tally.evaluations,
        })
    };

    if z == R::one() {
        let lny = property_l_direct(family, ln_x, 1, 1, 0)?;
        for n in 1..=bound.min(1000) {
            let closed = (lny / pow2::<R>(n)).exp();
            if R::one() - closed < eps {
                if let Some(w) = verify(1, 1, n, &mut tally) {
                    return Ok(w);
                }
            }
        }
        return Err(tally.not_found(bound));
    }

    let limit = R::lit(2.0 / 3.0).ln();
    let mut m = 1u64;
    while !(pow2::<R>(m) * ln_x < limit && (z == R::zero() || pow2::<R>(m) * z.ln() < limit)) {
        m += 1;
        if m > 1000 {
            return Err(Error::InvalidInput("start or target too close to 1".into()));
        }
    }
    let lny_abs = pow2::<R>(m) * ln_x.abs();
    let band = LogBand::new(z, eps).scaled(pow2::<R>(m));
    let mut witness = None;
    half_pow_scan(lny_abs, band, bound, &mut tally, |k, n, tally| {
        let closed = (-(R::from_u64_lossy(k) * R::LN_2() + lny_abs) / pow2::<R>(n + m)).exp();
        if (closed - z).abs() >= eps {
            tally.record((closed - z).abs());
            return false;
        }
        witness = verify(k, m, n, tally);
        witness.is_some()
    });
    witness.ok_or_else(|| tally.not_found(bound))
}

// ===========================================================================
// f1^k(f0^h(x)) for relation H
// ===========================================================================

/// `ln |C_h|` with `C_h = 3^h (ln(1/2)/2 + ln x) − ln(1/2)/2`, so that
/// `ln f1^k(f0^h(x)) = C_h · 2^{-k}`.
fn gabi_ln_c<R: Real>(ln_x_abs: R, h: u64) -> R {
    let half_ln2 = R::LN_2() / R::lit(2.0);
    let h_r = R::from_u64_lossy(h);
    h_r * R::lit(3.0).ln() + (half_ln2 + ln_x_abs - half_ln2 * (-h_r * R::lit(3.0).ln()).exp()).ln()
}

fn gabi_inner_range<R: Real>(ln_x_abs: R, band: LogBand<R>, h: u64) -> (R, R) {
    let ln_c = gabi_ln_c(ln_x_abs, h);
    (
        (ln_c - band.mag_hi.ln()) / R::LN_2(),
        (ln_c - band.mag_lo.ln()) / R::LN_2(),
    )
}

fn gabi_at<R: Real>(x: R, z: R, eps: R, h: u64, bound: u64, tally: &mut Tally<R>) -> Option<DensityWitness<R>> {
    let band = LogBand::new(z, eps);
    let (lo, hi) = gabi_inner_range(x.ln().abs(), band, h);
    for k in inner_candidates(lo, hi, bound) {
        let v = h_iterate_closed_form(x, h, k);
        let err = (v - z).abs();
        tally.record(err);
        if err < eps {
            return Some(DensityWitness {
                exponents: Exponents::Gabi { h, k },
                achieved: v,
                error: err,
                evaluations: tally.evaluations,
            });
        }
    }
    None
}

/// Finds `h ∈ [1, 2000]`, `k ∈ [1, bound]` with
/// `|(1/2)^{(3^h−1)/2^{k+1}} x^{3^h/2^k} − z| < eps`, scanning `h` upward.
pub fn search_gabi<R: Real>(x: R, z: R, eps: R, bound: u64) -> Result<DensityWitness<R>> {
    check_unit_open("x", x.to_f64_lossy(), false, 1.0)?;
    check_unit_open("z", z.to_f64_lossy(), true, 1.0)?;
    check_eps(eps)?;
    let mut tally = Tally::new();
    for h in 1..=GABI_H_CAP {
        if let Some(w) = gabi_at(x, z, eps, h, bound, &mut tally) {
            return Ok(w);
        }
    }
    Err(tally.not_found(bound))
}

/// [`search_gabi`] with semiconvergent steering of `h`.
pub fn search_gabi_fast<R: Real>(x: R, z: R, eps: R, bound: u64) -> Result<DensityWitness<R>> {
    check_unit_open("x", x.to_f64_lossy(), false, 1.0)?;
    check_unit_open("z", z.to_f64_lossy(), true, 1.0)?;
    check_eps(eps)?;
    let band = LogBand::new(z, eps);
    let ln_x_abs = x.ln().abs();
    let mut tally = Tally::new();
    let found = steer(
        GABI_H_CAP,
        |h| gabi_inner_range(ln_x_abs, band, h).0,
        |h, tally: &mut Tally<R>| gabi_at(x, z, eps, h, bound, tally),
        &mut tally,
    );
    match found {
        Some(w) => Ok(w),
        None => search_gabi(x, z, eps, bound).map(|mut w| {
            w.evaluations += tally.evaluations;
            w
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::definicija;

    #[test]
    fn pow23_first_hit() {
        let w = search_pow23(0.5f64, 0.25, 0.01, 32).unwrap();
        assert_eq!(w.exponents, Exponents::Pow23 { m: 20, n: 12 });
        assert!((w.achieved - 0.2547).abs() < 1e-4);
    }

    #[test]
    fn pow23_exact_and_miss() {
        let z = 0.5f64.powf(2.0 / 3.0);
        let w = search_pow23(0.5f64, z, 1e-12, 8).unwrap();
        assert_eq!(w.exponents, Exponents::Pow23 { m: 1, n: 1 });
        assert!(matches!(
            search_pow23(0.5f64, 0.3, 1e-15, 4),
            Err(Error::WitnessNotFound { bound: 4, .. })
        ));
    }

    #[test]
    fn gabi_exact() {
        let w = search_gabi(1.0f64, 0.5, 1e-9, 1 << 20).unwrap();
        assert_eq!(w.exponents, Exponents::Gabi { h: 2, k: 2 });
        assert!(w.error < 1e-12);
    }

    #[test]
    fn gabi_target_one() {
        let w = search_gabi(1.0f64, 1.0, 1e-3, 1 << 20).unwrap();
        let Exponents::Gabi { h, k } = w.exponents else { panic!() };
        assert_eq!(h, 1);
        assert!(k >= 9);
    }

    #[test]
    fn half_pow_exact_witnesses() {
        assert!((half_pow_value(0.5, 7, 3) - 0.5f64).abs() < 1e-15);
        let w = search_half_pow(0.5f64, 0.5, 1e-12, 20).unwrap();
        assert_eq!(w.exponents, Exponents::HalfPow { k: 1, n: 1 });
    }

    #[test]
    fn half_pow_zero_target() {
        for n0 in 1..=6u64 {
            let eps = 0.5f64.powi(n0 as i32);
            let w = search_half_pow(0.5f64, 0.0, eps, 30).unwrap();
            assert_eq!(w.exponents, Exponents::HalfPow { k: n0 << n0, n: n0 });
        }
    }

    #[test]
    fn property_l_target_one() {
        let fam = definicija::<f64>().unwrap();
        let w = search_property_l(&fam, 0.4, 1.0, 1e-3, 64).unwrap();
        let Exponents::PropertyL { k, m, .. } = w.exponents else { panic!() };
        assert_eq!((k, m), (1, 1));
    }

    #[test]
    fn witness_json_shape() {
        let w = search_pow23(0.5f64, 0.25, 0.01, 32).unwrap();
        let v: serde_json::Value = serde_json::from_str(&w.to_json()).unwrap();
        assert_eq!(v["exponents"]["m"], 20);
        assert_eq!(v["exponents"]["n"], 12);
        assert!(v["evaluations"].as_u64().unwrap() >= 1);
    }
}
