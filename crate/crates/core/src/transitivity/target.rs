use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::symbolic::{closeness_depth, enumerate_words, Alphabet, FiniteWord, Symbol};

/// An open cylinder: a symbol constraint on the leading coordinates and/or
/// open boxes on the leading real coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CylinderTarget {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word: Option<Vec<Symbol>>,
    #[serde(default, rename = "box", skip_serializing_if = "Vec::is_empty")]
    pub boxes: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetsFile {
    pub targets: Vec<CylinderTarget>,
}

impl CylinderTarget {
    pub fn validate(&self) -> Result<()> {
        let word_empty = self.word.as_ref().is_none_or(|w| w.is_empty());
        if word_empty && self.boxes.is_empty() {
            return Err(Error::InvalidInput("target has no constraints".into()));
        }
        for [lo, hi] in &self.boxes {
            if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InvalidInput(format!("box ({lo}, {hi}) is empty")));
            }
        }
        if let Some(e) = self.eps {
            if !(e > 0.0) {
                return Err(Error::InvalidInput(format!("eps = {e} must be positive")));
            }
        }
        Ok(())
    }

    /// Leading symbols and leading values fall inside the target. Returns the
    /// largest distance to a box center, or `None` on a miss.
    pub fn hit_distance(&self, symbols: Option<&[Symbol]>, values: &[f64]) -> Option<f64> {
        if let Some(word) = self.word.as_ref().filter(|w| !w.is_empty()) {
            let lead = symbols?;
            if lead.len() < word.len() || &lead[..word.len()] != word.as_slice() {
                return None;
            }
        }
        if values.len() < self.boxes.len() {
            return None;
        }
        let mut dist: f64 = 0.0;
        for ([lo, hi], &v) in self.boxes.iter().zip(values) {
            if !(*lo < v && v < *hi) {
                return None;
            }
            dist = dist.max((v - 0.5 * (lo + hi)).abs());
        }
        Some(dist)
    }
}

pub fn load_targets(json: &str) -> Result<Vec<CylinderTarget>> {
    let file: TargetsFile = serde_json::from_str(json)?;
    for t in &file.targets {
        t.validate()?;
    }
    Ok(file.targets)
}

/// Target for the one-sided skew system: a symbol prefix and a fibre point.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewTarget<R> {
    pub word: FiniteWord,
    pub t: R,
}

impl<R: Real> SkewTarget<R> {
    /// Reads `word` and the center of the first box. The tolerance is the
    /// target's `eps`, shrunk to the box half-width.
    pub fn from_cylinder(alphabet: Alphabet, target: &CylinderTarget) -> Result<(Self, R)> {
        target.validate()?;
        let [lo, hi] = *target
            .boxes
            .first()
            .ok_or_else(|| Error::InvalidInput("skew targets need a value box".into()))?;
        let word = FiniteWord::new(alphabet, target.word.clone().unwrap_or_default())?;
        let half = 0.5 * (hi - lo);
        let eps = target.eps.map_or(half, |e| e.min(half));
        Ok((
            Self {
                word,
                t: R::lit(0.5 * (lo + hi)),
            },
            R::lit(eps),
        ))
    }

    pub fn to_cylinder(&self, eps: R) -> CylinderTarget {
        let (t, e) = (self.t.to_f64_lossy(), eps.to_f64_lossy());
        CylinderTarget {
            word: Some(self.word.symbols().to_vec()),
            boxes: vec![[t - e, t + e]],
            eps: Some(e),
        }
    }
}

/// `eps_i = max(2^{-i}, floor)` for `i = 1..=count`.
pub fn default_eps_schedule<R: Real>(count: usize, floor: R) -> Vec<R> {
    (1..=count)
        .map(|i| R::lit(2.0).powi(-(i as i32)).max(floor))
        .collect()
}

/// Odd dyadic rationals in `(0, 1)`: `1/2, 1/4, 3/4, 1/8, 3/8, …`.
pub fn dyadic(index: usize) -> (u64, u32) {
    let mut level = 1u32;
    let mut start = 0usize;
    loop {
        let count = 1usize << (level - 1);
        if index < start + count {
            let j = (index - start) as u64;
            return (2 * j + 1, level);
        }
        start += count;
        level += 1;
    }
}

/// Words of length 1, 2, 3, … in lexicographic order, concatenated.
pub fn word_at(alphabet: Alphabet, mut index: usize) -> FiniteWord {
    let mut len = 1;
    loop {
        let count = alphabet.size().pow(len as u32);
        if index < count {
            return enumerate_words(alphabet, len).swap_remove(index);
        }
        index -= count;
        len += 1;
    }
}

/// Inverse Cantor pairing along diagonals: `0 ↦ (0,0), 1 ↦ (0,1), 2 ↦ (1,0), …`.
pub fn diagonal_pair(index: usize) -> (usize, usize) {
    let mut d = 0;
    let mut start = 0;
    while start + d < index {
        start += d + 1;
        d += 1;
    }
    let a = index - start;
    (a, d - a)
}

/// The first `count` targets of a dense enumeration of `C_n × (0, 1)`. Target
/// `i` pairs a cylinder word with a dyadic point. Words are padded with
/// `tail` up to the depth that makes word-agreement imply `eps_i`-closeness.
pub fn auto_skew_targets<R: Real>(alphabet: Alphabet, eps: &[R], tail: Symbol) -> Result<Vec<SkewTarget<R>>> {
    eps.iter()
        .enumerate()
        .map(|(i, &e)| {
            let (wi, di) = diagonal_pair(i);
            let mut word = word_at(alphabet, wi);
            let depth = closeness_depth(e, R::one());
            if word.len() < depth {
                word.push_run(tail, depth - word.len())?;
            }
            let (num, level) = dyadic(di);
            let t = R::from_u64_lossy(num) / R::lit(2.0).powi(level as i32);
            Ok(SkewTarget { word, t })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_example() {
        let t = load_targets(r#"{"targets":[{"word":[2],"box":[[0.2,0.3]],"eps":0.01}]}"#).unwrap();
        assert_eq!(t[0].word, Some(vec![2]));
        assert_eq!(t[0].boxes, vec![[0.2, 0.3]]);
        let a = Alphabet::new(3).unwrap();
        let (s, e) = SkewTarget::<f64>::from_cylinder(a, &t[0]).unwrap();
        assert!((s.t - 0.25).abs() < 1e-15 && (e - 0.01).abs() < 1e-15);
        assert!(load_targets(r#"{"targets":[{}]}"#).is_err());
    }

    #[test]
    fn hit_distance_rules() {
        let t = CylinderTarget {
            word: Some(vec![2]),
            boxes: vec![[0.2, 0.3]],
            eps: None,
        };
        assert!(t.hit_distance(Some(&[2, 1]), &[0.26]).is_some());
        assert!(t.hit_distance(Some(&[1, 1]), &[0.26]).is_none());
        assert!(t.hit_distance(Some(&[2]), &[0.3]).is_none());
        assert!(t.hit_distance(None, &[0.26]).is_none());
    }

    #[test]
    fn enumerations() {
        assert_eq!(dyadic(0), (1, 1));
        assert_eq!(dyadic(2), (3, 2));
        assert_eq!(dyadic(3), (1, 3));
        assert_eq!(diagonal_pair(0), (0, 0));
        assert_eq!(diagonal_pair(1), (0, 1));
        assert_eq!(diagonal_pair(2), (1, 0));
        assert_eq!(diagonal_pair(5), (2, 0));
        let a = Alphabet::new(2).unwrap();
        assert_eq!(word_at(a, 2).symbols(), &[1, 1]);
        let s = default_eps_schedule::<f64>(22, 1e-6);
        assert_eq!(s[0], 0.5);
        assert_eq!(s[21], 1e-6);
    }
}
