use serde::Serialize;

use crate::mahavier::MahavierWord;
use crate::scalar::Real;
use crate::symbolic::Symbol;
use crate::transitivity::skew::SkewState;
use crate::transitivity::target::CylinderTarget;

/// Something an orbit visits: exposes leading symbols and leading real coordinates.
pub trait Probe {
    fn leading_symbols(&self, m: usize) -> Option<Vec<Symbol>>;
    fn leading_values(&self, m: usize) -> Vec<f64>;
}

impl<R: Real> Probe for SkewState<R> {
    fn leading_symbols(&self, m: usize) -> Option<Vec<Symbol>> {
        self.symbols.leading(m)
    }

    fn leading_values(&self, _m: usize) -> Vec<f64> {
        vec![self.t.to_f64_lossy()]
    }
}

/// Symbols are the branch choices; values are the word's coordinates.
impl<R: Real> Probe for MahavierWord<R> {
    fn leading_symbols(&self, m: usize) -> Option<Vec<Symbol>> {
        let c = self.choices().symbols();
        (c.len() >= m).then(|| c[..m].to_vec())
    }

    fn leading_values(&self, m: usize) -> Vec<f64> {
        self.values().iter().take(m).map(|v| v.to_f64_lossy()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverageRow {
    pub target_id: usize,
    pub hit_step: Option<usize>,
    pub hit_distance: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverageReport {
    pub rows: Vec<CoverageRow>,
}

impl CoverageReport {
    pub fn fraction_hit(&self) -> f64 {
        if self.rows.is_empty() {
            return 1.0;
        }
        let hits = self.rows.iter().filter(|r| r.hit_step.is_some()).count();
        hits as f64 / self.rows.len() as f64
    }

    pub fn all_hit(&self) -> bool {
        self.rows.iter().all(|r| r.hit_step.is_some())
    }

    /// `target_id,hit_step,hit_distance`, with empty fields for misses.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["target_id", "hit_step", "hit_distance"])
            .expect("in-memory write");
        for r in &self.rows {
            w.write_record([
                r.target_id.to_string(),
                r.hit_step.map(|s| s.to_string()).unwrap_or_default(),
                r.hit_distance.map(|d| format!("{d:e}")).unwrap_or_default(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }
}

/// First step at which each target is hit.
pub fn orbit_coverage<P: Probe>(orbit: &[P], targets: &[CylinderTarget]) -> CoverageReport {
    let rows = targets
        .iter()
        .enumerate()
        .map(|(id, target)| {
            let depth = target.word.as_ref().map_or(0, |w| w.len());
            let hit = orbit.iter().enumerate().find_map(|(step, p)| {
                let symbols = p.leading_symbols(depth);
                let values = p.leading_values(target.boxes.len());
                target
                    .hit_distance(symbols.as_deref(), &values)
                    .map(|d| (step, d))
            });
            CoverageRow {
                target_id: id,
                hit_step: hit.map(|h| h.0),
                hit_distance: hit.map(|h| h.1),
            }
        })
        .collect();
    CoverageReport { rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::definicija;
    use crate::symbolic::{Alphabet, OneSidedWord};
    use crate::transitivity::skew::SkewSystem;

    #[test]
    fn coverage_of_sqrt_orbit() {
        let sys = SkewSystem::new(definicija::<f64>().unwrap());
        let a = Alphabet::new(3).unwrap();
        let s0 = SkewState::one_sided(OneSidedWord::constant(a, 1).unwrap(), 0.01);
        let orbit = sys.orbit(&s0, 10).unwrap();
        let targets = vec![
            CylinderTarget {
                word: Some(vec![1]),
                boxes: vec![[0.3, 0.4]],
                eps: None,
            },
            CylinderTarget {
                word: Some(vec![2]),
                boxes: vec![],
                eps: None,
            },
        ];
        let r = orbit_coverage(&orbit, &targets);
        assert_eq!(r.rows[0].hit_step, Some(2));
        assert_eq!(r.rows[1].hit_step, None);
        assert_eq!(r.fraction_hit(), 0.5);
        assert!(r.to_csv().starts_with("target_id,hit_step,hit_distance\n0,2,"));
        let empty: Vec<SkewState<f64>> = vec![];
        assert_eq!(orbit_coverage(&empty, &targets).fraction_hit(), 0.0);
    }
}
