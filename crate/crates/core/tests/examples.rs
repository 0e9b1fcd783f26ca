use fanlab::density::{
    half_pow_proof_choice, half_pow_value, pow23_value, property_l_word, search_gabi, search_half_pow, search_pow23,
    search_property_l, Exponents,
};
use fanlab::fans::{canonicalize, is_endpoint_certified, lelek_endpoint_near, FanPoint, FanSymbols};
use fanlab::mahavier::{enumerate_mahavier, interleave_t, metric_d2, ClosedRelation, TwoSidedMahavierWindow};
use fanlab::maps::{catalog, compose_word, definicija, family_from_json, relation_h, tent};
use fanlab::symbolic::{Alphabet, FiniteWord, OneSidedWord, TwoSidedSymbolWindow};
use fanlab::transitivity::{build_sigma_chain, build_transitive_point, CylinderTarget, SkewState, SkewSystem, SkewTarget};

fn h() -> ClosedRelation<f64> {
    ClosedRelation::from_family(relation_h().unwrap())
}

fn iterate_three_maps(x: f64, word: &[u8]) -> f64 {
    word.iter().fold(x, |t, &s| match s {
        1 => t.sqrt(),
        2 if t <= 2.0 / 3.0 => t / 2.0,
        2 => 2.0 * t - 1.0,
        _ => t * t,
    })
}

#[test]
fn tent_peak() {
    let f = tent::<f64>().unwrap();
    assert_eq!(f.get(1).unwrap().eval(0.5).unwrap(), 1.0);
}

#[test]
fn h_word_evaluation() {
    let rel = h();
    let w = FiniteWord::new(rel.alphabet(), vec![1, 2]).unwrap();
    let v = compose_word(rel.family(), &w, 1.0).unwrap();
    assert!((v - 0.5f64.sqrt()).abs() < 1e-15);
}

#[test]
fn catalog_shapes() {
    let d = definicija::<f64>().unwrap();
    assert_eq!(d.len(), 3);
    assert!(d.all_invertible());
    let e2 = catalog::<f64>("exx2").unwrap();
    assert_eq!(e2.len(), 2);
    assert_eq!(e2.domain().intervals().len(), 2);
    assert_eq!(e2.get(2).unwrap().eval(0.5).unwrap(), 2.5);
    assert_eq!(e2.get(2).unwrap().eval(2.5).unwrap(), 0.5);
    let hf = relation_h::<f64>().unwrap();
    assert_eq!(hf.get(1).unwrap().eval(0.5).unwrap(), 0.0625);
    assert_eq!(hf.get(2).unwrap().eval(0.25).unwrap(), 0.5);
}

#[test]
fn h_depth_two_words() {
    let words = enumerate_mahavier(&h(), 1.0, 2, 1_000_000).unwrap();
    let got: Vec<Vec<f64>> = words.iter().map(|w| w.values().to_vec()).collect();
    let r = 0.5f64.sqrt();
    let want = [vec![1.0, 0.5, 0.0625], vec![1.0, 0.5, r], vec![1.0, 1.0, 0.5], vec![1.0, 1.0, 1.0]];
    assert_eq!(got.len(), 4);
    for (g, w) in got.iter().zip(want.iter()) {
        for (a, b) in g.iter().zip(w) {
            assert!((a - b).abs() < 1e-15);
        }
    }
    assert_eq!(words[1].choices().symbols(), &[1, 2]);
}

#[test]
fn interleave_short_window() {
    let rel = ClosedRelation::from_family(catalog::<f64>("exx3").unwrap());
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(5);
    let w = fanlab::checks::random_general_window(&rel, -2, 2, &mut rng).unwrap();
    let t = interleave_t(&w, &rel).unwrap();
    assert_eq!(t.len(), 4);
}

#[test]
fn pow23_reference() {
    let w = search_pow23(0.5, 0.25, 0.01, 1 << 20).unwrap();
    assert_eq!(w.exponents, Exponents::Pow23 { m: 20, n: 12 });
    let direct = 0.5f64.powf(2f64.powi(20) / 3f64.powi(12));
    assert!((w.achieved - direct).abs() < 1e-12);
    assert!((direct - 0.2547).abs() < 1e-4);
    assert!(w.error < 0.005);
    assert!((pow23_value(0.5, 20, 12) - direct).abs() < 1e-12);
}

#[test]
fn half_pow_references() {
    for n0 in 1..8u64 {
        assert_eq!(half_pow_proof_choice(0.0, n0), Some(n0 << n0));
    }
    let w = search_half_pow(0.6, 0.3, 1e-3, 1 << 20).unwrap();
    let Exponents::HalfPow { k, n } = w.exponents else { panic!() };
    let scale = 2f64.powi(n as i32);
    let direct = 0.5f64.powf(k as f64 / scale) * 0.6f64.powf(1.0 / scale);
    assert!((direct - 0.3).abs() < 1e-3);
    assert!((half_pow_value(0.6, k, n) - direct).abs() < 1e-12);
}

#[test]
fn property_l_references() {
    let family = definicija::<f64>().unwrap();
    let alphabet = family.alphabet();
    for (x, z, eps) in [(0.5, 0.5, 1e-6), (0.9, 0.1, 1e-3), (0.3, 1.0, 1e-3)] {
        let w = search_property_l(&family, x, z, eps, 1 << 40).unwrap();
        let Exponents::PropertyL { k, m, n } = w.exponents else { panic!() };
        let word = property_l_word(alphabet, k, m, n).unwrap();
        assert!((iterate_three_maps(x, word.symbols()) - z).abs() < eps, "x={x} z={z}");
        if z == 1.0 {
            assert_eq!((m, k), (1, 1));
        }
    }
}

#[test]
fn gabi_reference() {
    let w = search_gabi(0.7, 0.2, 1e-3, 1 << 20).unwrap();
    let Exponents::Gabi { h, k } = w.exponents else { panic!() };
    let mut u = 0.7f64.ln();
    for _ in 0..h {
        u = 3.0 * u - 2f64.ln();
    }
    u /= 2f64.powi(k as i32);
    assert!((u.exp() - 0.2).abs() < 1e-3);
    assert_eq!(search_gabi(1.0, 0.5, 1e-3, 1 << 20).unwrap().exponents, Exponents::Gabi { h: 2, k: 2 });
}

#[test]
fn identity_square_skew_step() {
    let json = r#"{"domain": [[0, 1]], "branches": [
        {"invertible": true, "pieces": [{"interval": [0, 1], "expr": {"kind": "affine", "a": 1, "b": 0}}]},
        {"invertible": true, "pieces": [{"interval": [0, 1], "expr": {"kind": "power", "num": 2}}]}]}"#;
    let sys = SkewSystem::new(family_from_json::<f64>(json).unwrap());
    let a = Alphabet::new(2).unwrap();
    let x = OneSidedWord::new(FiniteWord::new(a, vec![1, 2, 1, 2, 1, 2]).unwrap(), 1).unwrap();
    let next = sys.step(&SkewState::one_sided(x, 0.3)).unwrap();
    assert_eq!(next.t, 0.3);
    assert_eq!(next.symbols.leading(3).unwrap(), vec![2, 1, 2]);
}

#[test]
fn single_target_transitive_point() {
    let family = definicija::<f64>().unwrap();
    let word = FiniteWord::new(family.alphabet(), vec![2]).unwrap();
    let targets = vec![SkewTarget { word, t: 0.25 }];
    let tp = build_transitive_point(&family, &targets, &[0.01], 0.5, 1 << 40).unwrap();
    let prefix = tp.prefix.symbols();
    let s = tp.hit_times[0];
    assert_eq!(s, prefix.len() - 1);
    assert_eq!(prefix[s], 2);
    assert!((iterate_three_maps(0.5, &prefix[..s]) - 0.25).abs() < 0.01 + 1e-9);
}

#[test]
fn sigma_chain_two_boxes() {
    let targets = vec![
        CylinderTarget { word: None, boxes: vec![[0.9, 1.0]], eps: None },
        CylinderTarget { word: None, boxes: vec![[0.4, 0.6]], eps: None },
    ];
    let chain = build_sigma_chain(&h(), &targets, 1 << 30).unwrap();
    let x1 = &chain.points[0];
    let ell = chain.lengths[0];
    assert!(x1.first() > 0.9);
    let v = x1.get(ell).unwrap();
    assert!(0.4 < v && v < 0.6);
}

#[test]
fn apex_identification() {
    let w = TwoSidedSymbolWindow::new(Alphabet::new(3).unwrap(), -1, vec![1, 2, 3]).unwrap();
    assert_eq!(canonicalize(FanSymbols::Window(w), 1.0f64).unwrap(), FanPoint::Apex);
}

#[test]
fn endpoint_near_zero_window() {
    let rel = h();
    let x = TwoSidedMahavierWindow::new(&rel, -12, vec![0.0; 25], vec![1; 24]).unwrap();
    let (e, cert) = lelek_endpoint_near(&rel, &x, 0.5).unwrap();
    assert_eq!(e.get(cert.index), Some(1.0));
    assert!(metric_d2(&x, &e, 1.0).unwrap().value < 0.5);
}

#[test]
fn certificate_reads_value_one() {
    let rel = h();
    let values = vec![1.0, 1.0, 0.5, 0.0625];
    let x = TwoSidedMahavierWindow::new(&rel, -1, values, vec![2, 1, 1]).unwrap();
    assert_eq!(is_endpoint_certified(&x).unwrap().index, 0);
}
