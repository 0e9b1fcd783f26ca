//! The two-sided skew map rebuilt as `S ∘ T ∘ σ^{-1} ∘ T^{-1} ∘ S^{-1}`, where `T`
//! identifies the inverse limit of the one-sided skew map with pairs
//! `((a, b), t)`.

use crate::error::{Error, Result};
use crate::mahavier::{conjugacy_s, conjugacy_s_inverse};
use crate::maps::MapFamily;
use crate::scalar::Real;
use crate::symbolic::{reverse_prefix, FiniteWord, TwoSidedSymbolWindow};

/// A truncated point `(z_1, …, z_K)` of the inverse limit of the one-sided skew
/// map `h`, with `z_k = h(z_{k+1})`. Each word is a finite prefix.
#[derive(Clone, Debug, PartialEq)]
pub struct InverseLimitPoint<R> {
    pub coords: Vec<(FiniteWord, R)>,
}

/// `h(w, t) = (σ(w), f_{w(1)}(t))` on finite prefixes.
fn bond<R: Real>(family: &MapFamily<R>, w: &FiniteWord, t: R) -> Result<(FiniteWord, R)> {
    let lead = w.get(1).ok_or_else(|| Error::TooShort("empty prefix".into()))?;
    let t = family.get(lead)?.eval(t)?;
    Ok((FiniteWord::new(w.alphabet(), w.symbols()[1..].to_vec())?, t))
}

/// `T^{-1}((a, b), t)`: `z_k = (b[k−1] ⊕ a, f^{-1}_{b[k−1]}(t))` for `k = 1..=|b|+1`.
pub fn t_inverse<R: Real>(family: &MapFamily<R>, a: &FiniteWord, b: &FiniteWord, t: R) -> Result<InverseLimitPoint<R>> {
    let mut coords = Vec::with_capacity(b.len() + 1);
    for k in 0..=b.len() {
        let rb = reverse_prefix(b, k)?;
        let tk = family.inverse_word_compose(&rb, t)?;
        let mut w = rb;
        w.append(a)?;
        coords.push((w, tk));
    }
    Ok(InverseLimitPoint { coords })
}

/// `T(z) = ((a, b), t)` with `a`, `t` read from `z_1` and `b` from the longest
/// coordinate's leading symbols.
pub fn t_forward<R: Real>(z: &InverseLimitPoint<R>) -> Result<(FiniteWord, FiniteWord, R)> {
    let (a, t) = z.coords.first().cloned().ok_or_else(|| Error::TooShort("empty point".into()))?;
    let depth = z.coords.len() - 1;
    let (last, _) = &z.coords[depth];
    let b = reverse_prefix(last, depth)?;
    Ok((a, b, t))
}

/// `σ^{-1}(z_1, z_2, …) = (h(z_1), z_1, z_2, …)`.
pub fn shift_inverse_limit<R: Real>(family: &MapFamily<R>, z: &InverseLimitPoint<R>) -> Result<InverseLimitPoint<R>> {
    let (w, t) = &z.coords[0];
    let mut coords = Vec::with_capacity(z.coords.len() + 1);
    coords.push(bond(family, w, *t)?);
    coords.extend(z.coords.iter().cloned());
    Ok(InverseLimitPoint { coords })
}

/// Largest `|z_k.t − h(z_{k+1}).t|` over the truncation, or `None` when symbols disagree.
pub fn bonding_defect<R: Real>(family: &MapFamily<R>, z: &InverseLimitPoint<R>) -> Result<Option<R>> {
    let mut worst = R::zero();
    for pair in z.coords.windows(2) {
        let (w, t) = bond(family, &pair[1].0, pair[1].1)?;
        if w != pair[0].0 {
            return Ok(None);
        }
        worst = worst.max((t - pair[0].1).abs());
    }
    Ok(Some(worst))
}

/// The two-sided skew step computed through the inverse limit.
pub fn skew_step_via_inverse_limit<R: Real>(
    family: &MapFamily<R>,
    window: &TwoSidedSymbolWindow,
    t: R,
) -> Result<(TwoSidedSymbolWindow, R)> {
    let (a, b, t) = conjugacy_s_inverse(window, t)?;
    let z = t_inverse(family, &a, &b, t)?;
    let z = shift_inverse_limit(family, &z)?;
    let (a, b, t) = t_forward(&z)?;
    conjugacy_s(&a, &b, t)
}
