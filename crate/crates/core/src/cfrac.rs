//! Continued-fraction expansions and rational approximations.

use crate::scalar::Real;

/// Partial quotients `[a0; a1, a2, …]` of `x`, at most `max_terms` of them.
pub fn partial_quotients<R: Real>(x: R, max_terms: usize) -> Vec<i64> {
    let mut out = Vec::new();
    let mut v = x;
    for _ in 0..max_terms {
        let a = v.floor();
        let Some(ai) = a.to_i64() else { break };
        out.push(ai);
        let frac = v - a;
        if frac <= R::epsilon() * R::lit(16.0) * v.abs().max(R::one()) {
            break;
        }
        v = frac.recip();
    }
    out
}

/// Convergents `p_k / q_k` of `x` with `q_k <= max_den`.
pub fn convergents<R: Real>(x: R, max_den: u64) -> Vec<(i64, u64)> {
    let mut out = Vec::new();
    let (mut p0, mut q0, mut p1, mut q1) = (1i128, 0i128, 0i128, 1i128);
    for a in partial_quotients(x, 64) {
        let p = a as i128 * p0 + p1;
        let q = a as i128 * q0 + q1;
        if q > max_den as i128 {
            break;
        }
        out.push((p as i64, q as u64));
        (p1, q1, p0, q0) = (p0, q0, p, q);
    }
    out
}

/// Convergents and intermediate fractions `(p_{k-1} + t·p_k) / (q_{k-1} + t·q_k)`
/// with denominators up to `max_den`.
pub fn semiconvergents<R: Real>(x: R, max_den: u64) -> Vec<(i64, u64)> {
    let quotients = partial_quotients(x, 64);
    let mut out = Vec::new();
    let (mut p_prev, mut q_prev, mut p, mut q) = (1i128, 0i128, quotients[0] as i128, 1i128);
    out.push((p as i64, q as u64));
    for &a in quotients.iter().skip(1) {
        for t in 1..=a as i128 {
            let pt = p_prev + t * p;
            let qt = q_prev + t * q;
            if qt > max_den as i128 {
                return out;
            }
            out.push((pt as i64, qt as u64));
        }
        let (pn, qn) = (p_prev + a as i128 * p, q_prev + a as i128 * q);
        (p_prev, q_prev, p, q) = (p, q, pn, qn);
    }
    out
}

/// Best rational approximation with denominator at most `max_den`, drawn from
/// the semiconvergents.
pub fn best_rational<R: Real>(x: R, max_den: u64) -> (i64, u64) {
    let negative = x < R::zero();
    let ax = x.abs();
    let mut best = (ax.round().to_i64().unwrap_or(0), 1u64);
    let mut best_err = (ax - R::lit(best.0 as f64)).abs();
    for (p, q) in semiconvergents(ax, max_den) {
        let err = (ax - R::lit(p as f64) / R::lit(q as f64)).abs();
        if err < best_err {
            best = (p, q);
            best_err = err;
        }
    }
    if negative {
        (-best.0, best.1)
    } else {
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log2_3_convergents() {
        let theta = 3f64.ln() / 2f64.ln();
        let c = convergents(theta, 1000);
        assert_eq!(
            c,
            vec![(1, 1), (2, 1), (3, 2), (8, 5), (19, 12), (65, 41), (84, 53), (485, 306), (1054, 665)]
        );
    }

    #[test]
    fn best_rational_thirds() {
        assert_eq!(best_rational(0.3333, 64), (1, 3));
        assert_eq!(best_rational(-0.5, 64), (-1, 2));
        assert_eq!(best_rational(2.0, 64), (2, 1));
    }
}
