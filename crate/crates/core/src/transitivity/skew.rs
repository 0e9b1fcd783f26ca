use crate::error::{Error, Result};
use crate::maps::MapFamily;
use crate::scalar::Real;
use crate::symbolic::{concat, Direction, FiniteWord, OneSidedWord, Symbol, TwoSidedSymbolWindow};

/// Symbol coordinate of a skew-product state.
#[derive(Clone, Debug, PartialEq)]
pub enum SymbolState {
    OneSided(OneSidedWord),
    TwoSided(TwoSidedSymbolWindow),
}

impl SymbolState {
    /// `x(1)`, the symbol that selects the fibre map.
    pub fn lead(&self) -> Result<Symbol> {
        match self {
            SymbolState::OneSided(w) => Ok(w.get(1)),
            SymbolState::TwoSided(w) => w
                .get(1)
                .ok_or_else(|| Error::WindowTooShort("index 1 missing".into())),
        }
    }

    /// `x(1), …, x(m)` where available.
    pub fn leading(&self, m: usize) -> Option<Vec<Symbol>> {
        match self {
            SymbolState::OneSided(w) => Some(w.take(m).symbols().to_vec()),
            SymbolState::TwoSided(w) => (1..=m as i64).map(|k| w.get(k)).collect(),
        }
    }
}

/// A point `(x, t)` of `C_n × X`.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewState<R> {
    pub symbols: SymbolState,
    pub t: R,
}

impl<R: Real> SkewState<R> {
    pub fn one_sided(w: OneSidedWord, t: R) -> Self {
        Self {
            symbols: SymbolState::OneSided(w),
            t,
        }
    }

    pub fn two_sided(w: TwoSidedSymbolWindow, t: R) -> Self {
        Self {
            symbols: SymbolState::TwoSided(w),
            t,
        }
    }
}

/// The skew product `(x, t) ↦ (σ(x), f_{x(1)}(t))` of a map family over the shift.
#[derive(Clone, Debug)]
pub struct SkewSystem<R> {
    family: MapFamily<R>,
}

impl<R: Real> SkewSystem<R> {
    pub fn new(family: MapFamily<R>) -> Self {
        Self { family }
    }

    pub fn family(&self) -> &MapFamily<R> {
        &self.family
    }

    pub fn step(&self, s: &SkewState<R>) -> Result<SkewState<R>> {
        let lead = s.symbols.lead()?;
        let t = self.family.get(lead)?.eval(s.t)?;
        let symbols = match &s.symbols {
            SymbolState::OneSided(w) => SymbolState::OneSided(w.shift()),
            SymbolState::TwoSided(w) => SymbolState::TwoSided(w.shift(Direction::Forward)?),
        };
        Ok(SkewState { symbols, t })
    }

    /// `(τ^{-1}(x), f^{-1}_{x(0)}(t))` on the two-sided space.
    pub fn inverse_step(&self, s: &SkewState<R>) -> Result<SkewState<R>> {
        let SymbolState::TwoSided(w) = &s.symbols else {
            return Err(Error::NotApplicable("inverse step needs a two-sided state".into()));
        };
        if !self.family.all_invertible() {
            return Err(Error::NotInvertible);
        }
        let back = w.shift(Direction::Backward)?;
        let lead = back.get(1).expect("index 1 after backward shift");
        let t = self.family.get(lead)?.invert(s.t)?;
        Ok(SkewState::two_sided(back, t))
    }

    /// `[s0, h(s0), …, h^steps(s0)]`.
    pub fn orbit(&self, s0: &SkewState<R>, steps: usize) -> Result<Vec<SkewState<R>>> {
        let mut out = Vec::with_capacity(steps + 1);
        out.push(s0.clone());
        for _ in 0..steps {
            let next = self.step(out.last().expect("nonempty"))?;
            out.push(next);
        }
        Ok(out)
    }

    /// All preimages of a one-sided state: `(a ⊕ x, f_a^{-1}(t))` for every
    /// symbol `a` whose map reaches `t`.
    pub fn preimages(&self, s: &SkewState<R>) -> Result<Vec<SkewState<R>>> {
        let SymbolState::OneSided(w) = &s.symbols else {
            return Err(Error::NotApplicable("preimages are taken on one-sided states".into()));
        };
        let mut out = Vec::new();
        for a in self.family.alphabet().symbols() {
            if let Ok(t) = self.family.get(a)?.invert(s.t) {
                let lead = FiniteWord::new(self.family.alphabet(), vec![a])?;
                out.push(SkewState::one_sided(concat(&lead, w)?, t));
            }
        }
        Ok(out)
    }
}

pub fn skew_step<R: Real>(system: &SkewSystem<R>, s: &SkewState<R>) -> Result<SkewState<R>> {
    system.step(s)
}

pub fn skew_orbit<R: Real>(system: &SkewSystem<R>, s0: &SkewState<R>, steps: usize) -> Result<Vec<SkewState<R>>> {
    system.orbit(s0, steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::definicija;
    use crate::symbolic::Alphabet;

    fn sys() -> SkewSystem<f64> {
        SkewSystem::new(definicija().unwrap())
    }

    #[test]
    fn step_uses_first_symbol() {
        let a = Alphabet::new(3).unwrap();
        let w = OneSidedWord::new(FiniteWord::new(a, vec![3, 2, 1]).unwrap(), 1).unwrap();
        let s = sys().step(&SkewState::one_sided(w, 0.8)).unwrap();
        assert!((s.t - 0.64).abs() < 1e-15);
        assert_eq!(s.symbols.lead().unwrap(), 2);
        let s = sys().step(&s).unwrap();
        assert!((s.t - 0.32).abs() < 1e-15);
    }

    #[test]
    fn two_sided_round_trip() {
        let a = Alphabet::new(3).unwrap();
        let w = TwoSidedSymbolWindow::new(a, -2, vec![1, 2, 3, 2, 1]).unwrap();
        let s = SkewState::two_sided(w, 0.37);
        let back = sys().inverse_step(&sys().step(&s).unwrap()).unwrap();
        assert_eq!(back.symbols, s.symbols);
        assert!((back.t - s.t).abs() < 1e-12);
    }

    #[test]
    fn preimages_cover_every_symbol() {
        let a = Alphabet::new(3).unwrap();
        let s = SkewState::one_sided(OneSidedWord::constant(a, 2).unwrap(), 0.3);
        let pre = sys().preimages(&s).unwrap();
        assert_eq!(pre.len(), 3);
        for p in pre {
            let img = sys().step(&p).unwrap();
            assert!((img.t - 0.3).abs() < 1e-12);
            assert_eq!(img.symbols, s.symbols);
        }
    }
}
