//! Words over a finite alphabet `{1, …, n}` and the shift maps on them.
//!
//! Indices are 1-based for one-sided objects. Two-sided windows carry an explicit
//! lower index `lo <= 0` so that the coordinate left of the separator is index 0
//! and the coordinate right of it is index 1.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Real;

pub type Symbol = u8;

/// The alphabet `{1, …, n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    size: u8,
}

impl Alphabet {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 || size > u8::MAX as usize {
            return Err(Error::InvalidAlphabet(size));
        }
        Ok(Self { size: size as u8 })
    }

    pub fn size(&self) -> usize {
        self.size as usize
    }

    pub fn contains(&self, s: Symbol) -> bool {
        s >= 1 && s <= self.size
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> {
        1..=self.size
    }

    fn check(&self, s: Symbol) -> Result<()> {
        if self.contains(s) {
            Ok(())
        } else {
            Err(Error::InvalidSymbol {
                symbol: s as u32,
                size: self.size(),
            })
        }
    }

    fn check_same(&self, other: &Alphabet) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch {
                left: self.size(),
                right: other.size(),
            })
        }
    }
}

/// Read access to the symbols of a one-sided word, 1-based.
pub trait SymbolSource {
    fn alphabet(&self) -> Alphabet;
    /// Symbol at index `k >= 1`, or `None` past the end of a finite word.
    fn symbol_at(&self, k: usize) -> Option<Symbol>;
}

/// A finite word `(y(1), …, y(m))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteWord {
    alphabet: Alphabet,
    symbols: Vec<Symbol>,
}

impl FiniteWord {
    pub fn new(alphabet: Alphabet, symbols: Vec<Symbol>) -> Result<Self> {
        for &s in &symbols {
            alphabet.check(s)?;
        }
        Ok(Self { alphabet, symbols })
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        Self {
            alphabet,
            symbols: Vec::new(),
        }
    }

    /// `s` repeated `count` times.
    pub fn repeat(alphabet: Alphabet, s: Symbol, count: usize) -> Result<Self> {
        alphabet.check(s)?;
        Ok(Self {
            alphabet,
            symbols: vec![s; count],
        })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    /// 1-based access.
    pub fn get(&self, k: usize) -> Option<Symbol> {
        k.checked_sub(1).and_then(|i| self.symbols.get(i).copied())
    }

    /// First `m` symbols.
    pub fn prefix(&self, m: usize) -> Result<FiniteWord> {
        if m > self.len() {
            return Err(Error::OutOfRange {
                index: m as i64,
                available: self.len(),
            });
        }
        Ok(Self {
            alphabet: self.alphabet,
            symbols: self.symbols[..m].to_vec(),
        })
    }

    pub fn push(&mut self, s: Symbol) -> Result<()> {
        self.alphabet.check(s)?;
        self.symbols.push(s);
        Ok(())
    }

    pub fn append(&mut self, other: &FiniteWord) -> Result<()> {
        self.alphabet.check_same(&other.alphabet)?;
        self.symbols.extend_from_slice(&other.symbols);
        Ok(())
    }

    pub fn push_run(&mut self, s: Symbol, count: usize) -> Result<()> {
        self.alphabet.check(s)?;
        self.symbols.extend(std::iter::repeat_n(s, count));
        Ok(())
    }
}

impl SymbolSource for FiniteWord {
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn symbol_at(&self, k: usize) -> Option<Symbol> {
        self.get(k)
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

/// An infinite word stored as a finite prefix followed by a constant tail.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OneSidedWord {
    prefix: FiniteWord,
    tail: Symbol,
}

impl OneSidedWord {
    pub fn new(prefix: FiniteWord, tail: Symbol) -> Result<Self> {
        prefix.alphabet.check(tail)?;
        Ok(Self { prefix, tail })
    }

    pub fn constant(alphabet: Alphabet, s: Symbol) -> Result<Self> {
        Self::new(FiniteWord::empty(alphabet), s)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.prefix.alphabet
    }

    pub fn stored_prefix(&self) -> &FiniteWord {
        &self.prefix
    }

    pub fn tail_symbol(&self) -> Symbol {
        self.tail
    }

    /// 1-based access; never fails for `k >= 1`.
    pub fn get(&self, k: usize) -> Symbol {
        self.prefix.get(k).unwrap_or(self.tail)
    }

    /// Materializes the first `m` symbols.
    pub fn take(&self, m: usize) -> FiniteWord {
        let symbols = (1..=m).map(|k| self.get(k)).collect();
        FiniteWord {
            alphabet: self.alphabet(),
            symbols,
        }
    }

    /// The shift `σ(w)(k) = w(k+1)`.
    pub fn shift(&self) -> OneSidedWord {
        shift_one_sided(self)
    }
}

impl SymbolSource for OneSidedWord {
    fn alphabet(&self) -> Alphabet {
        self.prefix.alphabet
    }

    fn symbol_at(&self, k: usize) -> Option<Symbol> {
        (k >= 1).then(|| self.get(k))
    }
}

impl fmt::Display for OneSidedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}^inf", self.prefix, self.tail)
    }
}

/// Shifts a one-sided word by one place. A word with an empty stored prefix is
/// constant and is returned unchanged.
pub fn shift_one_sided(w: &OneSidedWord) -> OneSidedWord {
    let symbols = w.prefix.symbols.get(1..).unwrap_or(&[]).to_vec();
    OneSidedWord {
        prefix: FiniteWord {
            alphabet: w.prefix.alphabet,
            symbols,
        },
        tail: w.tail,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// A finite window `[lo, hi]` of a two-sided sequence with `lo <= 0 < hi`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwoSidedSymbolWindow {
    alphabet: Alphabet,
    lo: i64,
    symbols: Vec<Symbol>,
}

impl TwoSidedSymbolWindow {
    /// `symbols[i]` is the symbol at index `lo + i`.
    pub fn new(alphabet: Alphabet, lo: i64, symbols: Vec<Symbol>) -> Result<Self> {
        for &s in &symbols {
            alphabet.check(s)?;
        }
        let hi = lo + symbols.len() as i64 - 1;
        if lo > 0 || hi < 1 {
            return Err(Error::WindowTooShort(format!(
                "window [{lo}, {hi}] must straddle the separator"
            )));
        }
        Ok(Self {
            alphabet,
            lo,
            symbols,
        })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.symbols.len() as i64 - 1
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn get(&self, k: i64) -> Option<Symbol> {
        let i = k - self.lo;
        (i >= 0).then(|| self.symbols.get(i as usize).copied()).flatten()
    }

    /// Forward: `x'(k) = x(k+1)`, window `[lo-1, hi-1]`. Backward: `x'(k) = x(k-1)`,
    /// window `[lo+1, hi+1]`.
    pub fn shift(&self, direction: Direction) -> Result<Self> {
        match direction {
            Direction::Forward => {
                if self.hi() < 2 {
                    return Err(Error::WindowTooShort(format!(
                        "forward shift needs hi >= 2, have {}",
                        self.hi()
                    )));
                }
                Ok(Self {
                    alphabet: self.alphabet,
                    lo: self.lo - 1,
                    symbols: self.symbols.clone(),
                })
            }
            Direction::Backward => {
                if self.lo > -1 {
                    return Err(Error::WindowTooShort(format!(
                        "backward shift needs lo <= -1, have {}",
                        self.lo
                    )));
                }
                Ok(Self {
                    alphabet: self.alphabet,
                    lo: self.lo + 1,
                    symbols: self.symbols.clone(),
                })
            }
        }
    }
}

impl fmt::Display for TwoSidedSymbolWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.symbols.iter().enumerate() {
            let k = self.lo + i as i64;
            if k == 1 {
                write!(f, "; ")?;
            } else if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

/// Right operand of [`concat`].
pub trait Concat: Sized {
    fn prepend(&self, left: &FiniteWord) -> Result<Self>;
}

impl Concat for FiniteWord {
    fn prepend(&self, left: &FiniteWord) -> Result<Self> {
        left.alphabet.check_same(&self.alphabet)?;
        let mut symbols = left.symbols.clone();
        symbols.extend_from_slice(&self.symbols);
        Ok(FiniteWord {
            alphabet: self.alphabet,
            symbols,
        })
    }
}

impl Concat for OneSidedWord {
    fn prepend(&self, left: &FiniteWord) -> Result<Self> {
        Ok(OneSidedWord {
            prefix: self.prefix.prepend(left)?,
            tail: self.tail,
        })
    }
}

/// `left ⊕ right`; the result has the kind of `right`.
pub fn concat<W: Concat>(left: &FiniteWord, right: &W) -> Result<W> {
    right.prepend(left)
}

/// `y[m] = (y(m), …, y(1))`.
pub fn reverse_prefix<W: SymbolSource>(w: &W, m: usize) -> Result<FiniteWord> {
    let mut symbols = Vec::with_capacity(m);
    for k in (1..=m).rev() {
        let s = w.symbol_at(k).ok_or(Error::OutOfRange {
            index: k as i64,
            available: k - 1,
        })?;
        symbols.push(s);
    }
    Ok(FiniteWord {
        alphabet: w.alphabet(),
        symbols,
    })
}

/// `x` and `y` agree on their first `n` coordinates and the tail bound
/// `diam · 2^{-(n-1)}` is below `eps`. Sequences shorter than `n` are not close.
pub fn n_close<T: PartialEq, R: Real>(x: &[T], y: &[T], n: usize, eps: R, diam: R) -> bool {
    if x.len() < n || y.len() < n {
        return false;
    }
    let tail = diam * R::lit(2.0).powi(-(n as i32 - 1));
    x[..n] == y[..n] && tail < eps
}

/// Smallest `n >= 1` with `diam · 2^{-(n-1)} < eps`.
pub fn closeness_depth<R: Real>(eps: R, diam: R) -> usize {
    let mut n = 1usize;
    while diam * R::lit(2.0).powi(-(n as i32 - 1)) >= eps {
        n += 1;
    }
    n
}

/// All `n^length` words of the given length in lexicographic order.
pub fn enumerate_words(alphabet: Alphabet, length: usize) -> Vec<FiniteWord> {
    let n = alphabet.size() as u8;
    let mut out = Vec::with_capacity(n.max(1) as usize * length.max(1));
    let mut current = vec![1u8; length];
    loop {
        out.push(FiniteWord {
            alphabet,
            symbols: current.clone(),
        });
        let mut i = length;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] < n {
                current[i] += 1;
                for c in current.iter_mut().skip(i + 1) {
                    *c = 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a3() -> Alphabet {
        Alphabet::new(3).unwrap()
    }

    #[test]
    fn concat_one_sided() {
        let left = FiniteWord::new(a3(), vec![1, 2]).unwrap();
        let right = OneSidedWord::constant(a3(), 3).unwrap();
        let w = concat(&left, &right).unwrap();
        assert_eq!(w.take(5).symbols(), &[1, 2, 3, 3, 3]);
    }

    #[test]
    fn concat_rejects_mismatch() {
        let left = FiniteWord::new(Alphabet::new(2).unwrap(), vec![1]).unwrap();
        let right = FiniteWord::new(a3(), vec![3]).unwrap();
        assert!(matches!(
            concat(&left, &right),
            Err(Error::AlphabetMismatch { .. })
        ));
    }

    #[test]
    fn reverse_prefix_basic() {
        let w = OneSidedWord::new(FiniteWord::new(a3(), vec![1, 2, 3]).unwrap(), 1).unwrap();
        assert_eq!(reverse_prefix(&w, 3).unwrap().symbols(), &[3, 2, 1]);
        let f = FiniteWord::new(a3(), vec![1, 2]).unwrap();
        assert!(matches!(reverse_prefix(&f, 3), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn constant_word_shift_is_fixed() {
        let w = OneSidedWord::constant(a3(), 2).unwrap();
        assert_eq!(w.shift(), w);
    }

    #[test]
    fn window_shifts() {
        let w = TwoSidedSymbolWindow::new(a3(), -1, vec![1, 2, 3, 1]).unwrap();
        let f = w.shift(Direction::Forward).unwrap();
        assert_eq!((f.lo(), f.hi()), (-2, 1));
        assert_eq!(f.get(0), Some(3));
        assert!(matches!(
            f.shift(Direction::Forward),
            Err(Error::WindowTooShort(_))
        ));
        assert_eq!(f.shift(Direction::Backward).unwrap(), w);
    }

    #[test]
    fn enumerate_counts() {
        let ws = enumerate_words(a3(), 2);
        assert_eq!(ws.len(), 9);
        assert_eq!(ws[0].symbols(), &[1, 1]);
        assert_eq!(ws[8].symbols(), &[3, 3]);
        assert_eq!(enumerate_words(a3(), 0).len(), 1);
    }

    #[test]
    fn n_close_rule() {
        let x = [1u8, 2, 3, 1];
        let y = [1u8, 2, 3, 2];
        assert!(n_close(&x, &y, 3, 0.3, 1.0));
        assert!(!n_close(&x, &y, 3, 0.2, 1.0));
        assert!(!n_close(&x, &y, 4, 1.0, 1.0));
        assert_eq!(closeness_depth(0.01, 1.0), 8);
    }
}
