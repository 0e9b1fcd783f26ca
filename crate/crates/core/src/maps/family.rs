use crate::error::{Error, Result};
use crate::maps::domain::IntervalUnionDomain;
use crate::maps::piecewise::PiecewiseMap;
use crate::scalar::Real;
use crate::symbolic::{Alphabet, FiniteWord, Symbol};

/// Maps `f_1, …, f_n` on a common domain, indexed by the symbols of an alphabet.
#[derive(Clone, Debug, PartialEq)]
pub struct MapFamily<R> {
    name: String,
    maps: Vec<PiecewiseMap<R>>,
    alphabet: Alphabet,
}

impl<R: Real> MapFamily<R> {
    pub fn new(name: impl Into<String>, maps: Vec<PiecewiseMap<R>>) -> Result<Self> {
        let alphabet = Alphabet::new(maps.len())?;
        let first = maps[0].domain().clone();
        if maps.iter().any(|m| m.domain() != &first) {
            return Err(Error::InvalidMap("family members must share one domain".into()));
        }
        Ok(Self {
            name: name.into(),
            maps,
            alphabet,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn maps(&self) -> &[PiecewiseMap<R>] {
        &self.maps
    }

    pub fn domain(&self) -> &IntervalUnionDomain<R> {
        self.maps[0].domain()
    }

    /// `f_s` for a 1-based symbol.
    pub fn get(&self, s: Symbol) -> Result<&PiecewiseMap<R>> {
        (s as usize)
            .checked_sub(1)
            .and_then(|i| self.maps.get(i))
            .ok_or(Error::InvalidSymbol {
                symbol: s as u32,
                size: self.maps.len(),
            })
    }

    pub fn all_invertible(&self) -> bool {
        self.maps.iter().all(PiecewiseMap::is_invertible)
    }

    fn check_word(&self, word: &FiniteWord) -> Result<()> {
        if word.alphabet() != self.alphabet {
            return Err(Error::AlphabetMismatch {
                left: word.alphabet().size(),
                right: self.alphabet.size(),
            });
        }
        Ok(())
    }

    /// `f_w(t) = f_{w(m)} ∘ … ∘ f_{w(1)}(t)`: the first letter acts first.
    pub fn compose_word(&self, word: &FiniteWord, t: R) -> Result<R> {
        self.check_word(word)?;
        word.symbols().iter().try_fold(t, |acc, &s| self.get(s)?.eval(acc))
    }

    /// [`compose_word`](Self::compose_word) carried out on `ln t`.
    pub fn compose_word_log(&self, word: &FiniteWord, u: R) -> Result<R> {
        self.check_word(word)?;
        word.symbols().iter().try_fold(u, |acc, &s| self.get(s)?.eval_log(acc))
    }

    /// Inverse of [`compose_word`](Self::compose_word) for the same word: the
    /// last letter's inverse acts first. With `word = y[m] = (y(m), …, y(1))`
    /// this is `f^{-1}_{y(m)} ∘ … ∘ f^{-1}_{y(1)}`.
    pub fn inverse_word_compose(&self, word: &FiniteWord, t: R) -> Result<R> {
        self.check_word(word)?;
        if !self.all_invertible() {
            return Err(Error::NotInvertible);
        }
        word.symbols()
            .iter()
            .rev()
            .try_fold(t, |acc, &s| self.get(s)?.invert(acc))
    }

    pub fn cast<S: Real>(&self) -> Result<MapFamily<S>> {
        MapFamily::new(
            self.name.clone(),
            self.maps.iter().map(PiecewiseMap::cast).collect::<Result<Vec<_>>>()?,
        )
    }
}
