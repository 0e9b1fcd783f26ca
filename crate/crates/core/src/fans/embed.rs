use std::fmt::Write as _;

use rayon::prelude::*;

use crate::mahavier::TwoSidedMahavierWindow;
use crate::maps::MapFamily;
use crate::scalar::Real;
use crate::symbolic::Symbol;

/// Ternary digits beyond this index do not move a point at SVG precision.
const MAX_DIGITS: usize = 32;

/// A sampled leg `t ↦ (t·c, −t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Leg {
    pub c: f64,
    pub points: Vec<(f64, f64, f64)>,
}

/// `Σ d_i / 3^i` over the digits.
pub fn ternary(digits: impl IntoIterator<Item = u8>) -> f64 {
    let mut c = 0.0;
    let mut w = 1.0;
    for d in digits.into_iter().take(MAX_DIGITS) {
        w /= 3.0;
        c += d as f64 * w;
    }
    c
}

/// The `2^depth` legs whose abscissae are the depth-`depth` approximants of
/// the middle-thirds Cantor set, each sampled at `samples` values of `t`.
pub fn embed_cantor_fan(depth: usize, samples: usize) -> Vec<Leg> {
    let depth = depth.max(1);
    let count = 1usize << depth;
    (0..count)
        .into_par_iter()
        .map(|i| {
            let digits = (0..depth).map(|j| if (i >> (depth - 1 - j)) & 1 == 1 { 2 } else { 0 });
            let c = ternary(digits);
            let points = (0..samples.max(1))
                .map(|s| {
                    let t = if samples <= 1 { 1.0 } else { s as f64 / (samples - 1) as f64 };
                    (t, t * c, -t)
                })
                .collect();
            Leg { c, points }
        })
        .collect()
}

/// Branch choices read outward from the separator: `m(0), m(−1), m(1), m(−2), …`.
fn outward_choices<R: Real>(w: &TwoSidedMahavierWindow<R>) -> Vec<Symbol> {
    let mut out = Vec::new();
    for r in 0.. {
        let (a, b) = (w.choice(-r), if r > 0 { w.choice(r) } else { None });
        if a.is_none() && b.is_none() && r > 0 {
            break;
        }
        out.extend(a);
        out.extend(b);
    }
    out
}

/// `(t·c, −t)` with `t` the coordinate at index 1 and `c` the ternary code of
/// the choice word, branch `1 ↦ 0` and branch `2 ↦ 2`.
pub fn embed_lelek<R: Real>(windows: &[TwoSidedMahavierWindow<R>]) -> Vec<(f64, f64)> {
    windows
        .par_iter()
        .map(|w| {
            let t = w.get(1).expect("windows reach index 1").to_f64_lossy();
            let c = ternary(outward_choices(w).into_iter().map(|s| if s >= 2 { 2 } else { 0 }));
            (t * c, -t)
        })
        .collect()
}

fn svg_open(out: &mut String) {
    out.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 -1 1 1\" width=\"512\" height=\"512\">\n",
    );
}

fn polyline(out: &mut String, pts: impl IntoIterator<Item = (f64, f64)>) {
    out.push_str("<polyline fill=\"none\" stroke=\"black\" stroke-width=\"0.002\" points=\"");
    let mut first = true;
    for (x, y) in pts {
        if !first {
            out.push(' ');
        }
        first = false;
        let _ = write!(out, "{x:.6},{y:.6}");
    }
    out.push_str("\"/>\n");
}

pub fn cantor_svg(legs: &[Leg]) -> String {
    let mut out = String::new();
    svg_open(&mut out);
    for leg in legs {
        polyline(&mut out, leg.points.iter().map(|p| (p.1, p.2)));
    }
    out.push_str("</svg>\n");
    out
}

/// One segment from the apex to each embedded point, sorted for stable output.
pub fn lelek_svg(points: &[(f64, f64)]) -> String {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let mut out = String::new();
    svg_open(&mut out);
    for p in pts {
        polyline(&mut out, [(0.0, 0.0), p]);
    }
    out.push_str("</svg>\n");
    out
}

/// Graphs of every branch, one polyline per piece, with the domain's hull
/// scaled onto the unit square.
pub fn relation_svg<R: Real>(family: &MapFamily<R>, samples: usize) -> String {
    let (a, b) = (family.domain().min().to_f64_lossy(), family.domain().max().to_f64_lossy());
    let scale = |v: f64| (v - a) / (b - a);
    let n = samples.max(2);
    let mut out = String::new();
    svg_open(&mut out);
    for map in family.maps() {
        for piece in map.pieces() {
            let (lo, hi) = (piece.interval.lo.to_f64_lossy(), piece.interval.hi.to_f64_lossy());
            let pts: Vec<(f64, f64)> = (0..n)
                .filter_map(|i| {
                    let t = lo + (hi - lo) * i as f64 / (n - 1) as f64;
                    let y = map.eval(R::lit(t)).ok()?.to_f64_lossy();
                    Some((scale(t), -scale(y)))
                })
                .collect();
            polyline(&mut out, pts);
        }
    }
    out.push_str("</svg>\n");
    out
}

/// `leg_id,t,x,y` rows.
pub fn legs_csv(legs: &[Leg]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["leg_id", "t", "x", "y"]).expect("in-memory write");
    for (id, leg) in legs.iter().enumerate() {
        for &(t, x, y) in &leg.points {
            w.write_record([id.to_string(), format!("{t:.6}"), format!("{x:.6}"), format!("{y:.6}")])
                .expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

/// Number of `<polyline` elements in an SVG document.
pub fn count_polylines(svg: &str) -> usize {
    svg.matches("<polyline").count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cantor_levels() {
        let cs: Vec<f64> = embed_cantor_fan(1, 3).iter().map(|l| l.c).collect();
        assert_eq!(cs, vec![0.0, 2.0 / 3.0]);
        let cs: Vec<f64> = embed_cantor_fan(2, 3).iter().map(|l| l.c).collect();
        let want = [0.0, 2.0 / 9.0, 2.0 / 3.0, 8.0 / 9.0];
        for (c, w) in cs.iter().zip(want) {
            assert!((c - w).abs() < 1e-15);
        }
        for leg in embed_cantor_fan(3, 5) {
            for (t, x, y) in leg.points {
                assert_eq!(y, -t);
                assert!((x - t * leg.c).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn svg_is_stable() {
        let a = cantor_svg(&embed_cantor_fan(6, 4));
        let b = cantor_svg(&embed_cantor_fan(6, 4));
        assert_eq!(a, b);
        assert_eq!(count_polylines(&a), 64);
        assert!(legs_csv(&embed_cantor_fan(1, 2)).starts_with("leg_id,t,x,y\n0,0.000000,"));
    }
}
