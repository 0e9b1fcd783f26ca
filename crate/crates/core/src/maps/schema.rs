//! JSON form of map families.
//!
//! ```json
//! {"domain": [[0, 1], [2, 3]],
//!  "branches": [{"invertible": true,
//!                "pieces": [{"interval": [0, 1], "expr": {"kind": "power", "p": 2}}]}]}
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::domain::IntervalUnionDomain;
use crate::maps::expr::{ElementaryExpr, Exponent};
use crate::maps::family::MapFamily;
use crate::maps::piecewise::{Piece, PiecewiseMap};
use crate::scalar::Real;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FamilySpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub domain: Vec<[f64; 2]>,
    pub branches: Vec<BranchSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BranchSpec {
    #[serde(default)]
    pub invertible: bool,
    pub pieces: Vec<PieceSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PieceSpec {
    pub interval: [f64; 2],
    pub expr: ExprSpec,
}

/// Exponents are given either as `p` (approximated by a fraction with
/// denominator at most 64) or exactly as `num`/`den`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExprSpec {
    Affine {
        a: f64,
        b: f64,
    },
    Power {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        num: Option<i32>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        den: Option<u32>,
    },
    ScaledPower {
        c: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        num: Option<i32>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        den: Option<u32>,
        #[serde(default)]
        s: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        s_in: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        s_out: Option<f64>,
    },
}

fn exponent(p: Option<f64>, num: Option<i32>, den: Option<u32>) -> Result<Exponent> {
    match (p, num) {
        (_, Some(n)) => Exponent::new(n, den.unwrap_or(1)),
        (Some(p), None) => Exponent::approximate(p),
        (None, None) => Err(Error::InvalidMap("power without exponent".into())),
    }
}

impl ExprSpec {
    fn build<R: Real>(&self) -> Result<ElementaryExpr<R>> {
        Ok(match *self {
            ExprSpec::Affine { a, b } => ElementaryExpr::affine(R::lit(a), R::lit(b)),
            ExprSpec::Power { p, num, den } => ElementaryExpr::Power(exponent(p, num, den)?),
            ExprSpec::ScaledPower { c, p, num, den, s, s_in, s_out } => ElementaryExpr::ScaledPower {
                c: R::lit(c),
                p: exponent(p, num, den)?,
                s_in: R::lit(s_in.unwrap_or(s)),
                s_out: R::lit(s_out.unwrap_or(s)),
            },
        })
    }

    fn from_expr<R: Real>(e: &ElementaryExpr<R>) -> Self {
        let f = |x: R| x.to_f64_lossy();
        match *e {
            ElementaryExpr::Affine { a, b } => ExprSpec::Affine { a: f(a), b: f(b) },
            ElementaryExpr::Power(p) => ExprSpec::Power {
                p: None,
                num: Some(p.num()),
                den: Some(p.den()),
            },
            ElementaryExpr::ScaledPower { c, p, s_in, s_out } => ExprSpec::ScaledPower {
                c: f(c),
                p: None,
                num: Some(p.num()),
                den: Some(p.den()),
                s: f(s_in),
                s_in: None,
                s_out: (s_out != s_in).then(|| f(s_out)),
            },
        }
    }
}

impl FamilySpec {
    pub fn build<R: Real>(&self) -> Result<MapFamily<R>> {
        let pairs: Vec<(f64, f64)> = self.domain.iter().map(|d| (d[0], d[1])).collect();
        let domain = IntervalUnionDomain::<R>::from_pairs(&pairs)?;
        let maps = self
            .branches
            .iter()
            .map(|b| {
                let pieces = b
                    .pieces
                    .iter()
                    .map(|p| Piece::new(R::lit(p.interval[0]), R::lit(p.interval[1]), p.expr.build()?))
                    .collect::<Result<Vec<_>>>()?;
                PiecewiseMap::new(domain.clone(), pieces, b.invertible)
            })
            .collect::<Result<Vec<_>>>()?;
        if maps.is_empty() {
            return Err(Error::InvalidMap("no branches".into()));
        }
        MapFamily::new(self.name.clone().unwrap_or_else(|| "custom".into()), maps)
    }

    pub fn from_family<R: Real>(family: &MapFamily<R>) -> Self {
        let f = |x: R| x.to_f64_lossy();
        FamilySpec {
            name: Some(family.name().to_string()),
            domain: family.domain().intervals().iter().map(|iv| [f(iv.lo), f(iv.hi)]).collect(),
            branches: family
                .maps()
                .iter()
                .map(|m| BranchSpec {
                    invertible: m.is_invertible(),
                    pieces: m
                        .pieces()
                        .iter()
                        .map(|p| PieceSpec {
                            interval: [f(p.interval.lo), f(p.interval.hi)],
                            expr: ExprSpec::from_expr(&p.expr),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

pub fn family_from_json<R: Real>(json: &str) -> Result<MapFamily<R>> {
    serde_json::from_str::<FamilySpec>(json)?.build()
}

pub fn family_to_json<R: Real>(family: &MapFamily<R>) -> Result<String> {
    Ok(serde_json::to_string(&FamilySpec::from_family(family))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::catalog::{catalog, CATALOG_NAMES};

    #[test]
    fn parses_documented_shape() {
        let json = r#"{"domain":[[0,1],[2,3]],"branches":[{"invertible":true,"pieces":[
            {"interval":[0,1],"expr":{"kind":"affine","a":1,"b":2}},
            {"interval":[2,3],"expr":{"kind":"affine","a":1,"b":-2}}]}]}"#;
        let fam = family_from_json::<f64>(json).unwrap();
        assert_eq!(fam.get(1).unwrap().eval(0.5).unwrap(), 2.5);
    }

    #[test]
    fn float_exponent_becomes_fraction() {
        let json = r#"{"domain":[[-1,1]],"branches":[{"invertible":true,"pieces":[
            {"interval":[-1,1],"expr":{"kind":"power","p":0.3333333}}]}]}"#;
        let fam = family_from_json::<f64>(json).unwrap();
        assert!((fam.get(1).unwrap().eval(-0.125).unwrap() + 0.5).abs() < 1e-12);
    }

    #[test]
    fn catalog_round_trips() {
        for name in CATALOG_NAMES {
            let fam = catalog::<f64>(name).unwrap();
            let back: MapFamily<f64> = family_from_json(&family_to_json(&fam).unwrap()).unwrap();
            assert_eq!(back, fam, "{name}");
        }
    }
}
