use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::mahavier::relation::ClosedRelation;
use crate::mahavier::word::{BackwardWord, MahavierWord, TwoSidedMahavierWindow};
use crate::scalar::Real;
use crate::symbolic::{FiniteWord, Symbol, TwoSidedSymbolWindow};

pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000;

/// All Mahavier words with `depth` steps from `start`, one per branch sequence,
/// in lexicographic order of the choices.
pub fn enumerate_mahavier<R: Real>(
    relation: &ClosedRelation<R>,
    start: R,
    depth: usize,
    budget: u64,
) -> Result<Vec<MahavierWord<R>>> {
    let needed = depth.max(1) as f64 * (relation.branch_count() as f64).powi(depth as i32);
    if needed > budget as f64 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    if !relation.domain().contains(start) {
        return Err(Error::OutOfDomain(start.to_f64_lossy()));
    }
    let mut out = Vec::new();
    let mut values = vec![start];
    let mut choices = Vec::new();
    descend(relation, depth, &mut values, &mut choices, &mut out)?;
    Ok(out)
}

fn descend<R: Real>(
    relation: &ClosedRelation<R>,
    depth: usize,
    values: &mut Vec<R>,
    choices: &mut Vec<Symbol>,
    out: &mut Vec<MahavierWord<R>>,
) -> Result<()> {
    if choices.len() == depth {
        out.push(MahavierWord::from_parts_unchecked(
            values.clone(),
            FiniteWord::new(relation.alphabet(), choices.clone())?,
        ));
        return Ok(());
    }
    let x = values[values.len() - 1];
    for b in relation.alphabet().symbols() {
        values.push(relation.branch(b, x)?);
        choices.push(b);
        descend(relation, depth, values, choices, out)?;
        values.pop();
        choices.pop();
    }
    Ok(())
}

/// Interleaves a two-sided window into a one-sided word:
/// `x_1 = f_{m(0)}(x(0))` and `x_{k+1} = f_{m(k/2)}(x_k)` for even `k`,
/// `f_{m(−(k+1)/2)}(x_k)` for odd `k`.
///
/// Needs invertible branches that meet only at common fixed points. A window
/// constant at such a point maps to the constant word. The output has
/// `hi + |lo|` values.
pub fn interleave_t<R: Real>(window: &TwoSidedMahavierWindow<R>, relation: &ClosedRelation<R>) -> Result<MahavierWord<R>> {
    if !relation.family().all_invertible() {
        return Err(Error::NotApplicable("branches are not all invertible".into()));
    }
    if !relation.branches_meet_only_at_fixed_points().holds {
        return Err(Error::NotApplicable(
            "branches meet outside the common fixed points".into(),
        ));
    }
    let len = (window.hi() + window.lo().abs()) as usize;
    let tol = R::identity_tol();
    let a = window.values()[0];
    if window.values().iter().all(|&v| (v - a).abs() <= tol) && relation.is_common_fixed_point(a, tol) {
        let choices = FiniteWord::repeat(relation.alphabet(), 1, len - 1)?;
        return MahavierWord::new(relation, vec![a; len], choices);
    }
    let x0 = window.get(0).ok_or_else(|| Error::WindowTooShort("index 0 missing".into()))?;
    let m0 = window.choice(0).ok_or_else(|| Error::WindowTooShort("choice m(0) missing".into()))?;
    let mut values = Vec::with_capacity(len);
    let mut choices = Vec::with_capacity(len.saturating_sub(1));
    values.push(relation.branch(m0, x0)?);
    for k in 1..len {
        let idx = if k % 2 == 0 { (k / 2) as i64 } else { -(k.div_ceil(2) as i64) };
        let b = window
            .choice(idx)
            .ok_or_else(|| Error::WindowTooShort(format!("choice m({idx}) missing")))?;
        values.push(relation.branch(b, values[k - 1])?);
        choices.push(b);
    }
    MahavierWord::new(relation, values, FiniteWord::new(relation.alphabet(), choices)?)
}

/// `(…, b(2), b(1); a(1), a(2), …)`: the backward word fills indices `0, −1, …`
/// and the forward word fills `1, 2, …`. The seam `(b(1), a(1))` must lie in `F`.
pub fn phi_pair_to_window<R: Real>(
    a: &MahavierWord<R>,
    b: &BackwardWord<R>,
    relation: &ClosedRelation<R>,
) -> Result<TwoSidedMahavierWindow<R>> {
    let seam = relation
        .certify_pair(b.values()[0], a.first(), R::iterated_tol())
        .ok_or(Error::SeamViolation(b.values()[0].to_f64_lossy(), a.first().to_f64_lossy()))?;
    let lo = 1 - b.len() as i64;
    let mut values: Vec<R> = b.values().iter().rev().copied().collect();
    values.extend_from_slice(a.values());
    let mut choices: Vec<Symbol> = b.choices().symbols().iter().rev().copied().collect();
    choices.push(seam);
    choices.extend_from_slice(a.choices().symbols());
    TwoSidedMahavierWindow::new(relation, lo, values, choices)
}

/// `S((a, b), t) = ((…, b(2), b(1); a(1), a(2), …), t)` on finite truncations.
pub fn conjugacy_s<R: Real>(a: &FiniteWord, b: &FiniteWord, t: R) -> Result<(TwoSidedSymbolWindow, R)> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::WindowTooShort("both halves must be nonempty".into()));
    }
    if a.alphabet() != b.alphabet() {
        return Err(Error::AlphabetMismatch {
            left: a.alphabet().size(),
            right: b.alphabet().size(),
        });
    }
    let mut symbols: Vec<Symbol> = b.symbols().iter().rev().copied().collect();
    symbols.extend_from_slice(a.symbols());
    let w = TwoSidedSymbolWindow::new(a.alphabet(), 1 - b.len() as i64, symbols)?;
    Ok((w, t))
}

/// Inverse of [`conjugacy_s`]: reads `a = (x(1), …, x(hi))` and
/// `b = (x(0), x(−1), …, x(lo))` back out of a window.
pub fn conjugacy_s_inverse<R: Real>(window: &TwoSidedSymbolWindow, t: R) -> Result<(FiniteWord, FiniteWord, R)> {
    let a = FiniteWord::new(window.alphabet(), (1..=window.hi()).filter_map(|k| window.get(k)).collect())?;
    let b = FiniteWord::new(
        window.alphabet(),
        (window.lo()..=0).rev().filter_map(|k| window.get(k)).collect(),
    )?;
    Ok((a, b, t))
}

/// A truncated distance with its tail bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricValue<R> {
    pub value: R,
    pub bound: R,
}

/// `Σ_{k=1}^{N} |x_k − y_k| / 2^k`; the bound covers the unseen tail.
pub fn metric_dplus<R: Real>(x: &[R], y: &[R], diam: R) -> Result<MetricValue<R>> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    let mut value = R::zero();
    let mut w = R::one();
    for (a, b) in x.iter().zip(y) {
        w = w / R::lit(2.0);
        value = value + (*a - *b).abs() * w;
    }
    Ok(MetricValue {
        value,
        bound: diam * w,
    })
}

/// `Σ_{k=lo}^{hi} |x(k) − y(k)| / 2^{|k|}` over identical windows.
pub fn metric_d2<R: Real>(
    x: &TwoSidedMahavierWindow<R>,
    y: &TwoSidedMahavierWindow<R>,
    diam: R,
) -> Result<MetricValue<R>> {
    if x.lo() != y.lo() || x.hi() != y.hi() {
        return Err(Error::WindowMismatch(x.lo(), x.hi(), y.lo(), y.hi()));
    }
    metric_d2_raw(x.lo(), x.values(), y.values(), diam)
}

pub(crate) fn metric_d2_raw<R: Real>(lo: i64, xs: &[R], ys: &[R], diam: R) -> Result<MetricValue<R>> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch(xs.len(), ys.len()));
    }
    let hi = lo + xs.len() as i64 - 1;
    let two = R::lit(2.0);
    let value = xs
        .iter()
        .zip(ys)
        .enumerate()
        .fold(R::zero(), |acc, (i, (a, b))| {
            let k = lo + i as i64;
            acc + (*a - *b).abs() * two.powi(-(k.abs() as i32))
        });
    let reach = lo.abs().min(hi);
    Ok(MetricValue {
        value,
        bound: two * diam * two.powi(-(reach as i32)),
    })
}

/// Terminal values of Mahavier words from `x` with `1..=depth` steps.
///
/// When the full tree fits in `budget` nodes it is enumerated exhaustively;
/// otherwise `budget` random words are drawn with uniform lengths and branches.
pub fn forward_impression_sample<R: Real>(
    relation: &ClosedRelation<R>,
    x: R,
    depth: usize,
    budget: u64,
    seed: u64,
) -> Result<Vec<R>> {
    let n = relation.branch_count() as f64;
    let tree: f64 = (1..=depth).map(|d| n.powi(d as i32)).sum();
    if tree <= budget as f64 {
        let mut out = Vec::new();
        for d in 1..=depth {
            out.extend(
                enumerate_mahavier(relation, x, d, u64::MAX)?
                    .into_iter()
                    .map(|w| w.last()),
            );
        }
        return Ok(out);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let branches = relation.branch_count() as u8;
    let mut out = Vec::with_capacity(budget as usize);
    for _ in 0..budget {
        let len = rng.gen_range(1..=depth.max(1));
        let mut t = x;
        for _ in 0..len {
            let b = rng.gen_range(1..=branches);
            t = relation.branch(b, t)?;
        }
        out.push(t);
    }
    Ok(out)
}

/// Fraction of `[lo, hi]` within `radius` of some sample.
pub fn net_coverage<R: Real>(samples: &[R], radius: R, lo: R, hi: R) -> R {
    let mut pts: Vec<R> = samples.iter().copied().filter(|v| v.is_finite()).collect();
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let mut covered = R::zero();
    let mut reach = lo;
    for p in pts {
        let a = (p - radius).max(reach).max(lo);
        let b = (p + radius).min(hi);
        if b > a {
            covered = covered + (b - a);
            reach = b;
        }
    }
    covered / (hi - lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{exx3, relation_h};

    fn h() -> ClosedRelation<f64> {
        ClosedRelation::from_family(relation_h().unwrap())
    }

    #[test]
    fn enumerate_h_depth_two() {
        let words = enumerate_mahavier(&h(), 1.0, 2, DEFAULT_NODE_BUDGET).unwrap();
        let got: Vec<Vec<f64>> = words.iter().map(|w| w.values().to_vec()).collect();
        let s = 0.5f64.sqrt();
        let expect = [
            vec![1.0, 0.5, 0.0625],
            vec![1.0, 0.5, s],
            vec![1.0, 1.0, 0.5],
            vec![1.0, 1.0, 1.0],
        ];
        assert_eq!(got.len(), 4);
        for (g, e) in got.iter().zip(&expect) {
            for (a, b) in g.iter().zip(e) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn enumerate_counts_and_respects_budget() {
        assert_eq!(enumerate_mahavier(&h(), 0.0, 3, DEFAULT_NODE_BUDGET).unwrap().len(), 8);
        assert!(matches!(
            enumerate_mahavier(&h(), 1.0, 30, DEFAULT_NODE_BUDGET),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn shift_truncated() {
        let rel = h();
        let w = MahavierWord::follow(&rel, 1.0, &FiniteWord::new(rel.alphabet(), vec![1, 2]).unwrap()).unwrap();
        let s = w.shift_forward_truncated().unwrap();
        assert_eq!(s.values()[0], 0.5);
        let single = MahavierWord::start(&rel, 0.3).unwrap();
        assert!(matches!(single.shift_forward_truncated(), Err(Error::TooShort(_))));
    }

    #[test]
    fn phi_constant_one() {
        let rel = h();
        let ones = FiniteWord::repeat(rel.alphabet(), 2, 3).unwrap();
        let a = MahavierWord::follow(&rel, 1.0, &ones).unwrap();
        let b = BackwardWord::new(&rel, vec![1.0, 1.0], FiniteWord::repeat(rel.alphabet(), 2, 1).unwrap()).unwrap();
        let w = phi_pair_to_window(&a, &b, &rel).unwrap();
        assert_eq!((w.lo(), w.hi()), (-1, 4));
        assert!(w.values().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn phi_rejects_bad_seam() {
        let rel = h();
        let a = MahavierWord::start(&rel, 0.9).unwrap();
        let b = BackwardWord::new(&rel, vec![0.1], FiniteWord::empty(rel.alphabet())).unwrap();
        assert!(matches!(phi_pair_to_window(&a, &b, &rel), Err(Error::SeamViolation(..))));
    }

    #[test]
    fn interleave_examples() {
        let rel = ClosedRelation::from_family(exx3::<f64>().unwrap());
        let zero = TwoSidedMahavierWindow::new(&rel, -3, vec![0.0; 7], vec![2; 6]).unwrap();
        let t = interleave_t(&zero, &rel).unwrap();
        assert_eq!(t.len(), 6);
        assert!(t.values().iter().all(|&v| v == 0.0));

        // x(0) = 1/2 with choices m(-1) = 1, m(0) = 2, m(1) = 2 on [-1, 2].
        let half = TwoSidedMahavierWindow::new(&rel, -1, vec![-0.5, 0.5, 0.25, 0.0625], vec![1, 2, 2]).unwrap();
        let t = interleave_t(&half, &rel).unwrap();
        assert_eq!(t.len(), 3);
        let expect = [0.25, -0.25, -0.25f64.cbrt()];
        for (a, b) in t.values().iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn interleave_needs_hypothesis() {
        let rel = h();
        let w = TwoSidedMahavierWindow::new(&rel, 0, vec![1.0, 1.0], vec![2]).unwrap();
        assert!(matches!(interleave_t(&w, &rel), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn conjugacy_s_round_trip() {
        let al = crate::symbolic::Alphabet::new(3).unwrap();
        let a = FiniteWord::new(al, vec![1, 2]).unwrap();
        let b = FiniteWord::new(al, vec![3, 1, 2]).unwrap();
        let (w, t) = conjugacy_s(&a, &b, 0.3).unwrap();
        assert_eq!(w.lo(), -2);
        assert_eq!(w.get(0), Some(3));
        assert_eq!(w.get(1), Some(1));
        let (a2, b2, t2) = conjugacy_s_inverse(&w, t).unwrap();
        assert_eq!((a2, b2, t2), (a, b, 0.3));
    }

    #[test]
    fn metric_bounds() {
        let m = metric_dplus(&[0.0f64, 0.0], &[1.0, 1.0], 1.0).unwrap();
        assert!((m.value - 0.75).abs() < 1e-15 && (m.bound - 0.25).abs() < 1e-15);
        assert!(metric_dplus(&[0.0], &[1.0, 1.0], 1.0).is_err());
    }

    #[test]
    fn coverage_measure() {
        assert!((net_coverage(&[0.5f64], 0.1, 0.0, 1.0) - 0.2).abs() < 1e-12);
        assert!((net_coverage(&[0.0f64, 1.0], 0.25, 0.0, 1.0) - 0.5).abs() < 1e-12);
    }
}
