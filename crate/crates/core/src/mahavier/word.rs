use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::mahavier::relation::ClosedRelation;
use crate::scalar::Real;
use crate::symbolic::{Alphabet, Direction, FiniteWord, Symbol};

/// A finite Mahavier word `(x_1, …, x_{m+1})` with `x_{k+1} = f_{b_k}(x_k)`.
///
/// Constructors check every consecutive pair against the relation at
/// [`Real::iterated_tol`]; an instance therefore always satisfies the constraint.
#[derive(Clone, Debug, PartialEq)]
pub struct MahavierWord<R> {
    values: Vec<R>,
    choices: FiniteWord,
}

impl<R: Real> MahavierWord<R> {
    pub fn new(relation: &ClosedRelation<R>, values: Vec<R>, choices: FiniteWord) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::TooShort("a Mahavier word needs at least one value".into()));
        }
        if choices.len() + 1 != values.len() {
            return Err(Error::LengthMismatch(values.len(), choices.len() + 1));
        }
        if choices.alphabet() != relation.alphabet() {
            return Err(Error::AlphabetMismatch {
                left: choices.alphabet().size(),
                right: relation.alphabet().size(),
            });
        }
        for &v in &values {
            if !relation.domain().contains(v) {
                return Err(Error::OutOfDomain(v.to_f64_lossy()));
            }
        }
        let tol = R::iterated_tol();
        for (k, (&b, w)) in choices.symbols().iter().zip(values.windows(2)).enumerate() {
            let y = relation.branch(b, w[0])?;
            if (y - w[1]).abs() > tol {
                return Err(Error::ConstraintViolation { position: k + 1 });
            }
        }
        Ok(Self { values, choices })
    }

    /// Infers the branch of each step; when several branches certify a step the
    /// lowest index wins. Returns the word and how many steps were ambiguous.
    pub fn from_values(relation: &ClosedRelation<R>, values: Vec<R>) -> Result<(Self, usize)> {
        let tol = R::iterated_tol();
        let mut choices = FiniteWord::empty(relation.alphabet());
        let mut ambiguous = 0;
        for (k, w) in values.windows(2).enumerate() {
            let b = relation
                .certify_pair(w[0], w[1], tol)
                .ok_or(Error::ConstraintViolation { position: k + 1 })?;
            if relation.certifying_count(w[0], w[1], tol) > 1 {
                ambiguous += 1;
            }
            choices.push(b)?;
        }
        Ok((Self::new(relation, values, choices)?, ambiguous))
    }

    /// The length-one word `(x)`.
    pub fn start(relation: &ClosedRelation<R>, x: R) -> Result<Self> {
        Self::new(relation, vec![x], FiniteWord::empty(relation.alphabet()))
    }

    /// Follows `choices` from `x`.
    pub fn follow(relation: &ClosedRelation<R>, x: R, choices: &FiniteWord) -> Result<Self> {
        let mut values = Vec::with_capacity(choices.len() + 1);
        values.push(x);
        let mut t = x;
        for &b in choices.symbols() {
            t = relation.branch(b, t)?;
            values.push(t);
        }
        Self::new(relation, values, choices.clone())
    }

    pub(crate) fn from_parts_unchecked(values: Vec<R>, choices: FiniteWord) -> Self {
        Self { values, choices }
    }

    pub fn values(&self) -> &[R] {
        &self.values
    }

    pub fn choices(&self) -> &FiniteWord {
        &self.choices
    }

    pub fn alphabet(&self) -> Alphabet {
        self.choices.alphabet()
    }

    /// Number of values, `m + 1`.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// 1-based access.
    pub fn get(&self, k: usize) -> Option<R> {
        k.checked_sub(1).and_then(|i| self.values.get(i).copied())
    }

    pub fn first(&self) -> R {
        self.values[0]
    }

    pub fn last(&self) -> R {
        self.values[self.values.len() - 1]
    }

    /// The first `n` values.
    pub fn truncate(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.len() {
            return Err(Error::OutOfRange {
                index: n as i64,
                available: self.len(),
            });
        }
        Ok(Self {
            values: self.values[..n].to_vec(),
            choices: self.choices.prefix(n - 1)?,
        })
    }

    /// Appends one step along branch `b`.
    pub fn extend(&mut self, relation: &ClosedRelation<R>, b: Symbol) -> Result<()> {
        let y = relation.branch(b, self.last())?;
        self.choices.push(b)?;
        self.values.push(y);
        Ok(())
    }

    /// `self ⋆ other`: requires `self.last() == other.first()` and drops the
    /// duplicated junction value.
    pub fn star(&self, other: &Self) -> Result<Self> {
        if (self.last() - other.first()).abs() > R::iterated_tol() {
            return Err(Error::ConstraintViolation {
                position: self.len(),
            });
        }
        let mut values = self.values.clone();
        values.extend_from_slice(&other.values[1..]);
        let mut choices = self.choices.clone();
        choices.append(&other.choices)?;
        Ok(Self { values, choices })
    }

    /// Drops the first value: `(x_2, …, x_{m+1})`.
    pub fn shift_forward_truncated(&self) -> Result<Self> {
        if self.len() < 2 {
            return Err(Error::TooShort("shift needs at least two values".into()));
        }
        Ok(Self {
            values: self.values[1..].to_vec(),
            choices: FiniteWord::new(self.alphabet(), self.choices.symbols()[1..].to_vec())?,
        })
    }

    /// `value_1,…,value_{m+1},choices` with choices joined by `-`.
    pub fn csv_row(&self) -> String {
        let mut row = String::new();
        for v in &self.values {
            let _ = write!(row, "{v},");
        }
        let choices: Vec<String> = self.choices.symbols().iter().map(|s| s.to_string()).collect();
        row.push_str(&choices.join("-"));
        row
    }
}

/// A word `(b(1), b(2), …)` read backwards through the relation:
/// `b(k) = f_{c_k}(b(k+1))`, so consecutive pairs lie in `F^{-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct BackwardWord<R> {
    values: Vec<R>,
    choices: FiniteWord,
}

impl<R: Real> BackwardWord<R> {
    pub fn new(relation: &ClosedRelation<R>, values: Vec<R>, choices: FiniteWord) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::TooShort("a backward word needs at least one value".into()));
        }
        if choices.len() + 1 != values.len() {
            return Err(Error::LengthMismatch(values.len(), choices.len() + 1));
        }
        let tol = R::iterated_tol();
        for (k, (&c, w)) in choices.symbols().iter().zip(values.windows(2)).enumerate() {
            let y = relation.branch(c, w[1])?;
            if (y - w[0]).abs() > tol {
                return Err(Error::ConstraintViolation { position: k + 1 });
            }
        }
        Ok(Self { values, choices })
    }

    pub fn values(&self) -> &[R] {
        &self.values
    }

    pub fn choices(&self) -> &FiniteWord {
        &self.choices
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// A window `[lo, hi]` of a two-sided Mahavier sequence: `values[i]` is the
/// coordinate at index `lo + i` and `x(k+1) = f_{m(k)}(x(k))` for `lo <= k < hi`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoSidedMahavierWindow<R> {
    lo: i64,
    values: Vec<R>,
    choices: Vec<Symbol>,
    alphabet: Alphabet,
}

impl<R: Real> TwoSidedMahavierWindow<R> {
    pub fn new(relation: &ClosedRelation<R>, lo: i64, values: Vec<R>, choices: Vec<Symbol>) -> Result<Self> {
        let hi = lo + values.len() as i64 - 1;
        if lo > 0 || hi < 1 {
            return Err(Error::WindowTooShort(format!(
                "window [{lo}, {hi}] must straddle the separator"
            )));
        }
        if choices.len() + 1 != values.len() {
            return Err(Error::LengthMismatch(values.len(), choices.len() + 1));
        }
        let word = FiniteWord::new(relation.alphabet(), choices)?;
        let checked = MahavierWord::new(relation, values, word)?;
        Ok(Self {
            lo,
            values: checked.values,
            choices: checked.choices.symbols().to_vec(),
            alphabet: relation.alphabet(),
        })
    }

    /// Infers choices with the lowest-index rule; returns the number of
    /// ambiguous steps alongside the window.
    pub fn from_values(relation: &ClosedRelation<R>, lo: i64, values: Vec<R>) -> Result<(Self, usize)> {
        let (word, ambiguous) = MahavierWord::from_values(relation, values)?;
        let w = Self::new(relation, lo, word.values, word.choices.symbols().to_vec())?;
        Ok((w, ambiguous))
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.values.len() as i64 - 1
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn values(&self) -> &[R] {
        &self.values
    }

    /// Choices `m(lo), …, m(hi − 1)`.
    pub fn choices(&self) -> &[Symbol] {
        &self.choices
    }

    pub fn get(&self, k: i64) -> Option<R> {
        let i = k - self.lo;
        (i >= 0).then(|| self.values.get(i as usize).copied()).flatten()
    }

    /// `m(k)`, the branch carrying index `k` to `k + 1`.
    pub fn choice(&self, k: i64) -> Option<Symbol> {
        let i = k - self.lo;
        (i >= 0).then(|| self.choices.get(i as usize).copied()).flatten()
    }

    /// Shift of the two-sided sequence; the stored data is reindexed.
    pub fn shift(&self, direction: Direction) -> Result<Self> {
        let lo = match direction {
            Direction::Forward if self.hi() >= 2 => self.lo - 1,
            Direction::Backward if self.lo <= -1 => self.lo + 1,
            _ => {
                return Err(Error::WindowTooShort(format!(
                    "cannot shift [{}, {}] {direction:?}",
                    self.lo,
                    self.hi()
                )))
            }
        };
        Ok(Self {
            lo,
            values: self.values.clone(),
            choices: self.choices.clone(),
            alphabet: self.alphabet,
        })
    }

    /// Restriction to `[lo, hi]`.
    pub fn restrict(&self, lo: i64, hi: i64) -> Result<Self> {
        if lo < self.lo || hi > self.hi() || lo > 0 || hi < 1 {
            return Err(Error::WindowMismatch(lo, hi, self.lo, self.hi()));
        }
        let a = (lo - self.lo) as usize;
        let b = (hi - self.lo) as usize;
        Ok(Self {
            lo,
            values: self.values[a..=b].to_vec(),
            choices: self.choices[a..b].to_vec(),
            alphabet: self.alphabet,
        })
    }

}
