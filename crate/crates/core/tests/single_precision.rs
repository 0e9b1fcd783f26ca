use fanlab::density::{search_gabi, search_pow23, Exponents};
use fanlab::mahavier::{enumerate_mahavier, ClosedRelation};
use fanlab::maps::{definicija, relation_h};
use fanlab::symbolic::{Alphabet, OneSidedWord};
use fanlab::transitivity::{SkewState, SkewSystem};

#[test]
fn searches_in_f32() {
    let w = search_pow23(0.5f32, 0.25, 0.01, 1 << 20).unwrap();
    assert_eq!(w.exponents, Exponents::Pow23 { m: 20, n: 12 });
    let g = search_gabi(1.0f32, 0.5, 1e-3, 1 << 20).unwrap();
    assert_eq!(g.exponents, Exponents::Gabi { h: 2, k: 2 });
}

#[test]
fn relations_and_skew_maps_in_f32() {
    let rel = ClosedRelation::from_family(relation_h::<f32>().unwrap());
    assert_eq!(enumerate_mahavier(&rel, 1.0f32, 6, 1_000_000).unwrap().len(), 64);
    let sys = SkewSystem::new(definicija::<f32>().unwrap());
    let s0 = SkewState::one_sided(OneSidedWord::constant(Alphabet::new(3).unwrap(), 1).unwrap(), 0.25f32);
    let orbit = sys.orbit(&s0, 2).unwrap();
    assert!((orbit[1].t - 0.5).abs() < 1e-6);
}
