mod common;

use gbs_core::corpus;
use gbs_core::cyclic::{axis_turns, cyclic_reduce, translation_length, Direction, TurnKey};
use gbs_core::graph::{GbsGraph, VertexId};
use gbs_core::word::{britton_reduce, conjugate, multiply, GroupWord, Reducer};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn word(g: &GbsGraph, s: &str) -> GroupWord {
    GroupWord::parse(g, VertexId(0), &[s]).unwrap()
}

fn reduce_letters(g: &GbsGraph, letters: &[gbs_core::word::Letter]) -> GroupWord {
    let mut r = Reducer::new(g, VertexId(0));
    for l in letters {
        match l {
            gbs_core::word::Letter::Syl(k) => r.push_syllable(k),
            gbs_core::word::Letter::Edge(e) => r.push_edge(*e).unwrap(),
        }
    }
    r.finish()
}

fn graphs() -> Vec<(&'static str, GbsGraph)> {
    vec![("bs24", corpus::bs24()), ("rose3", corpus::rose3(2)), ("traintrack", corpus::traintrack_graph(2))]
}

#[test]
fn bs24_relation_reduces() {
    let g = corpus::bs24();
    assert_eq!(britton_reduce(&g, &word(&g, "t a^2 T")), word(&g, "a^4"));
    assert_eq!(britton_reduce(&g, &word(&g, "T a^4 t")), word(&g, "a^2"));
    assert_eq!(britton_reduce(&g, &word(&g, "t a T")).edge_count(), 2);
}

#[test]
fn empty_word_is_fixed() {
    let g = corpus::bs24();
    let e = GroupWord::identity(VertexId(0));
    assert_eq!(britton_reduce(&g, &e), e);
    assert!(e.is_identity());
}

#[test]
fn malformed_adjacency_is_rejected() {
    let g = corpus::traintrack_graph(2);
    assert!(GroupWord::parse(&g, VertexId(0), &["ee ee"]).is_err());
    assert!(GroupWord::parse(&g, VertexId(0), &["x"]).is_err());
}

#[test]
fn coset_representatives_before_edges() {
    // x^{qλ(ē)+r} e = x^r e x^{qλ(e)}: in BS(2,4), a^5 t = a t a^2.
    let g = corpus::bs24();
    let w = britton_reduce(&g, &word(&g, "a^5 t"));
    assert_eq!(w, word(&g, "a t a^2"));
}

#[test]
fn oracle_agreement_on_bundled_presentations() {
    for (name, g) in graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for i in 0..2000 {
            let len = 1 + i % 12;
            let letters = common::random_letters(&mut rng, &g, VertexId(0), len, 5);
            let fast = reduce_letters(&g, &letters);
            assert_eq!(common::layout(&fast), common::naive_normal_form(&g, VertexId(0), &letters), "{name}: {letters:?}");
        }
    }
}

#[test]
fn cyclic_reduction_of_conjugate() {
    let g = corpus::bs24();
    let (c, conj) = cyclic_reduce(&g, &britton_reduce(&g, &word(&g, "a t a^-1"))).unwrap();
    assert_eq!(c.edge_count(), 1);
    assert_eq!(conj, word(&g, "a"));
    let back = conjugate(&g, &conj, &c.to_word()).unwrap();
    assert_eq!(back, britton_reduce(&g, &word(&g, "a t a^-1")));
}

#[test]
fn cyclically_reduced_word_has_trivial_conjugator() {
    let g = corpus::bs24();
    let (_, conj) = cyclic_reduce(&g, &word(&g, "t")).unwrap();
    assert!(conj.is_identity());
}

#[test]
fn elliptic_conjugate_of_vertex_element() {
    let g = corpus::bs24();
    let (c, _) = cyclic_reduce(&g, &britton_reduce(&g, &word(&g, "t a^2 T"))).unwrap();
    assert!(c.is_elliptic());
    assert_eq!(c.syllables(), &[BigInt::from(4)]);
}

#[test]
fn translation_lengths_in_bs24() {
    let g = corpus::bs24();
    assert_eq!(translation_length(&g, &word(&g, "a")).unwrap(), 0.0);
    assert_eq!(translation_length(&g, &word(&g, "t")).unwrap(), 1.0);
    let m = corpus::bs24_marked().scaled(2.0).normalize_volume();
    assert!((translation_length(m.graph(), &word(m.graph(), "t")).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn turns_of_t_in_bs24() {
    let g = corpus::bs24();
    let t = g.edge_by_name("t").unwrap();
    let turns = axis_turns(&g, &word(&g, "t")).unwrap();
    let expect = TurnKey::new(
        &g,
        Direction { edge: g.rev(t), residue: 0 },
        Direction { edge: t, residue: 0 },
    );
    assert_eq!(turns, vec![expect]);
}

#[test]
fn phi_sends_r_to_s() {
    let p = corpus::phi(2);
    let rg = p.presentation().graph();
    assert_eq!(p.apply(&word(rg, "r")).unwrap(), word(rg, "s"));
}

#[test]
fn phi_then_inverse_is_identity() {
    let p = corpus::phi(2);
    let rg = p.presentation().graph().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..100 {
        let l = common::random_closed_letters(&mut rng, &rg, VertexId(0), 1 + i % 10, 3);
        let w = reduce_letters(&rg, &l);
        assert_eq!(p.apply_inverse(&p.apply(&w).unwrap()).unwrap(), w);
        assert_eq!(p.apply(&p.apply_inverse(&w).unwrap()).unwrap(), w);
    }
}

#[test]
fn identity_substitution_reduces() {
    let m = corpus::reference_point(corpus::rose3(2)).unwrap();
    let g = m.graph();
    let w = word(g, "r u^3 R s S");
    assert_eq!(m.realize(&w).unwrap(), britton_reduce(g, &w));
}

fn closed_word(seed: u64, len: usize, which: usize) -> (GbsGraph, GroupWord) {
    let (_, g) = graphs().swap_remove(which % 3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let l = common::random_closed_letters(&mut rng, &g, VertexId(0), len, 4);
    let w = reduce_letters(&g, &l);
    (g, w)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reduce_is_idempotent(seed in any::<u64>(), len in 0usize..14, which in 0usize..3) {
        let (g, w) = closed_word(seed, len, which);
        prop_assert_eq!(britton_reduce(&g, &w), w);
    }

    #[test]
    fn power_scales_translation_length(seed in any::<u64>(), len in 1usize..10, which in 0usize..3, k in 1usize..4) {
        let (g, w) = closed_word(seed, len, which);
        let mut p = w.clone();
        for _ in 1..k {
            p = multiply(&g, &p, &w).unwrap();
        }
        let l1 = translation_length(&g, &w).unwrap();
        let lk = translation_length(&g, &p).unwrap();
        prop_assert!((lk - k as f64 * l1).abs() < 1e-9);
    }

    #[test]
    fn conjugation_invariance(seed in any::<u64>(), len in 1usize..10, which in 0usize..3, hseed in any::<u64>()) {
        let (g, w) = closed_word(seed, len, which);
        let (_, h) = closed_word(hseed, 5, which);
        let c = conjugate(&g, &h, &w).unwrap();
        let (cw, _) = cyclic_reduce(&g, &w).unwrap();
        let (cc, _) = cyclic_reduce(&g, &c).unwrap();
        prop_assert!((cw.translation_length(&g) - cc.translation_length(&g)).abs() < 1e-9);
        if !cw.is_elliptic() {
            // Normal forms agree only up to the vertex-group action, e.g. a^4 t a^-4 = t a^-2.
            prop_assert_eq!(cw.edges().len(), cc.edges().len());
            prop_assert_eq!(axis_turns(&g, &w).unwrap().len(), axis_turns(&g, &c).unwrap().len());
        }
    }

    #[test]
    fn cyclic_reduce_factors_the_word(seed in any::<u64>(), len in 1usize..12, which in 0usize..3) {
        let (g, w) = closed_word(seed, len, which);
        let (c, conj) = cyclic_reduce(&g, &w).unwrap();
        prop_assert_eq!(conjugate(&g, &conj, &c.to_word()).unwrap(), w);
    }

    #[test]
    fn square_doubles_turn_multiset(seed in any::<u64>(), len in 1usize..10, which in 0usize..3) {
        let (g, w) = closed_word(seed, len, which);
        let (c, _) = cyclic_reduce(&g, &w).unwrap();
        prop_assume!(!c.is_elliptic());
        let a = axis_turns(&g, &w).unwrap();
        let mut b = axis_turns(&g, &multiply(&g, &w, &w).unwrap()).unwrap();
        let mut a2: Vec<_> = a.iter().chain(a.iter()).cloned().collect();
        a2.sort();
        b.sort();
        prop_assert_eq!(a2, b);
    }

    #[test]
    fn ellipticity_is_preserved_by_phi(seed in any::<u64>(), len in 1usize..8) {
        let p = corpus::phi(2);
        let rg = p.presentation().graph().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = common::random_closed_letters(&mut rng, &rg, VertexId(0), len, 3);
        let w = reduce_letters(&rg, &l);
        let e0 = cyclic_reduce(&rg, &w).unwrap().0.is_elliptic();
        let e1 = cyclic_reduce(&rg, &p.apply(&w).unwrap()).unwrap().0.is_elliptic();
        prop_assert_eq!(e0, e1);
    }
}
