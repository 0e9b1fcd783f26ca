use fanlab::density::{pow23_value, property_l_word, search_gabi, search_pow23, search_property_l, Exponents};
use fanlab::fans::{canonicalize, count_polylines, cantor_svg, embed_cantor_fan, leg_window, random_window, FanPoint, FanSymbols};
use fanlab::mahavier::{conjugacy_s, conjugacy_s_inverse, enumerate_mahavier, interleave_t, metric_d2, ClosedRelation};
use fanlab::maps::{compose_word, definicija, exx3, h_iterate_closed_form, inverse_word_compose, relation_h};
use fanlab::symbolic::{enumerate_words, Alphabet, Direction, FiniteWord, TwoSidedSymbolWindow};
use fanlab::transitivity::{orbit_coverage, CylinderTarget, SkewState, SkewSystem};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn alphabet3() -> Alphabet {
    Alphabet::new(3).unwrap()
}

fn window_strategy() -> impl Strategy<Value = TwoSidedSymbolWindow> {
    (1i64..6, prop::collection::vec(1u8..=3, 8..16))
        .prop_map(|(neg, symbols)| TwoSidedSymbolWindow::new(alphabet3(), -neg, symbols).unwrap())
}

fn satisfies(rel: &ClosedRelation<f64>, values: &[f64], choices: &[u8]) -> bool {
    choices.len() + 1 == values.len()
        && choices
            .iter()
            .zip(values.windows(2))
            .all(|(&b, w)| (rel.branch(b, w[0]).unwrap() - w[1]).abs() <= 1e-9)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pow23_witness_within_eps(x in 0.05f64..0.95, z in 0.05f64..0.95) {
        let w = search_pow23(x, z, 1e-3, 1 << 20).unwrap();
        let Exponents::Pow23 { m, n } = w.exponents else { panic!("wrong exponents") };
        prop_assert!((pow23_value(x, m, n) - z).abs() < 1e-3);
        let direct = (x.ln() * ((m as f64) * 2f64.ln() - (n as f64) * 3f64.ln()).exp()).exp();
        prop_assert!((direct - z).abs() < 1e-3);
    }

    #[test]
    fn gabi_witness_within_eps(x in 0.05f64..=1.0, z in 0.05f64..0.95) {
        let w = search_gabi(x, z, 1e-3, 1 << 20).unwrap();
        let Exponents::Gabi { h, k } = w.exponents else { panic!("wrong exponents") };
        prop_assert!((h_iterate_closed_form(x, h, k) - z).abs() < 1e-3);
    }

    #[test]
    fn property_l_word_shape(x in 0.01f64..0.99, z in 0.0f64..=1.0) {
        let family = definicija::<f64>().unwrap();
        let w = search_property_l(&family, x, z, 1e-2, 1 << 40).unwrap();
        let Exponents::PropertyL { k, m, n } = w.exponents else { panic!("wrong exponents") };
        prop_assert!(k >= 1 && m >= 1 && n >= 1);
        let word = property_l_word(alphabet3(), k, m, n).unwrap();
        prop_assert_eq!(word.len() as u64, k + 2 * m + n);
    }

    #[test]
    fn skew_step_inverts(w in window_strategy(), t in 0.0f64..1.0) {
        let sys = SkewSystem::new(definicija::<f64>().unwrap());
        let s = SkewState::two_sided(w, t);
        let back = sys.inverse_step(&sys.step(&s).unwrap()).unwrap();
        prop_assert_eq!(&back.symbols, &s.symbols);
        prop_assert!((back.t - t).abs() <= 1e-12);
    }

    #[test]
    fn word_composition_inverts(symbols in prop::collection::vec(1u8..=3, 0..12), t in 0.01f64..0.99) {
        let family = definicija::<f64>().unwrap();
        let word = FiniteWord::new(alphabet3(), symbols).unwrap();
        let img = compose_word(&family, &word, t).unwrap();
        prop_assume!(img > 1e-300);
        let back = inverse_word_compose(&family, &word, img).unwrap();
        prop_assert!((back - t).abs() <= 1e-6);
    }

    #[test]
    fn conjugacy_round_trip(w in window_strategy(), t in 0.0f64..1.0) {
        let (a, b, t2) = conjugacy_s_inverse(&w, t).unwrap();
        let (w2, t3) = conjugacy_s(&a, &b, t2).unwrap();
        prop_assert_eq!(w2, w);
        prop_assert_eq!(t3, t);
    }

    #[test]
    fn shift_round_trip(w in window_strategy()) {
        let back = w.shift(Direction::Forward).unwrap().shift(Direction::Backward).unwrap();
        for k in back.lo()..=back.hi() {
            prop_assert_eq!(back.get(k), w.get(k));
        }
    }

    #[test]
    fn canonicalize_is_idempotent(w in window_strategy(), t in 0.0f64..=1.0) {
        let p = canonicalize(FanSymbols::Window(w), t).unwrap();
        prop_assert_eq!(p.clone().canonical().unwrap(), p.clone());
        prop_assert_eq!(p.is_apex(), t == 1.0);
        if let FanPoint::Leg { t: s, .. } = p {
            prop_assert!(s < 1.0);
        }
    }

    #[test]
    fn interleaving_stays_in_the_relation(seed in any::<u64>()) {
        let rel = ClosedRelation::from_family(exx3::<f64>().unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = fanlab::checks::random_general_window(&rel, -6, 6, &mut rng).unwrap();
        prop_assert!(satisfies(&rel, w.values(), w.choices()));
        let t = interleave_t(&w, &rel).unwrap();
        prop_assert!(satisfies(&rel, t.values(), t.choices().symbols()));
    }

    #[test]
    fn random_windows_satisfy_h(seed in any::<u64>()) {
        let rel = ClosedRelation::from_family(relation_h::<f64>().unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_window(&rel, -10, 10, &mut rng).unwrap();
        prop_assert!(satisfies(&rel, w.values(), w.choices()));
        prop_assert_eq!(metric_d2(&w, &w, 1.0).unwrap().value, 0.0);
    }

    #[test]
    fn legs_increase_with_t(choices in prop::collection::vec(1u8..=2, 12), s in 0.05f64..0.5, ds in 0.01f64..0.5) {
        let rel = ClosedRelation::from_family(relation_h::<f64>().unwrap());
        let (lo, hi) = (leg_window(&rel, -6, &choices, s), leg_window(&rel, -6, &choices, s + ds));
        prop_assume!(lo.is_ok() && hi.is_ok());
        let (lo, hi) = (lo.unwrap(), hi.unwrap());
        for (a, b) in lo.values().iter().zip(hi.values()) {
            prop_assert!(a <= b);
        }
    }

    #[test]
    fn cantor_leg_count(depth in 1usize..9, samples in 2usize..6) {
        let legs = embed_cantor_fan(depth, samples);
        prop_assert_eq!(legs.len(), 1 << depth);
        prop_assert_eq!(count_polylines(&cantor_svg(&legs)), 1 << depth);
        for pair in legs.windows(2) {
            prop_assert!(pair[0].c < pair[1].c);
        }
    }

    #[test]
    fn coverage_is_deterministic(t0 in 0.01f64..0.99, lo in 0.0f64..0.9) {
        let sys = SkewSystem::new(definicija::<f64>().unwrap());
        let s0 = SkewState::one_sided(fanlab::symbolic::OneSidedWord::constant(alphabet3(), 1).unwrap(), t0);
        let orbit = sys.orbit(&s0, 50).unwrap();
        let targets = vec![CylinderTarget { word: Some(vec![1]), boxes: vec![[lo, lo + 0.1]], eps: None }];
        let a = orbit_coverage(&orbit, &targets);
        let b = orbit_coverage(&orbit, &targets);
        prop_assert_eq!(a.to_csv(), b.to_csv());
    }
}

#[test]
fn word_enumeration_is_complete() {
    for len in 0..6 {
        let words = enumerate_words(alphabet3(), len);
        assert_eq!(words.len(), 3usize.pow(len as u32));
        let distinct: std::collections::BTreeSet<_> = words.iter().map(|w| w.symbols().to_vec()).collect();
        assert_eq!(distinct.len(), words.len());
    }
}

#[test]
fn mahavier_prefix_consistency() {
    let rel = ClosedRelation::from_family(relation_h::<f64>().unwrap());
    for depth in 1..9 {
        let longer = enumerate_mahavier(&rel, 1.0, depth + 1, u64::MAX).unwrap();
        let shorter = enumerate_mahavier(&rel, 1.0, depth, u64::MAX).unwrap();
        assert_eq!(longer.len(), 2 * shorter.len());
        for (i, w) in longer.iter().enumerate() {
            assert_eq!(w.truncate(depth + 1).unwrap(), shorter[i / 2]);
        }
    }
}
