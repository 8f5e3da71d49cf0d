use gbs_core::corpus;
use gbs_core::exec::Exec;
use gbs_core::lipschitz::{
    enumerate_candidates, lipschitz_distance, lipschitz_distance_with, simple_cycles, sup_check_random, Shape,
};
use gbs_core::moves::{random_deform, rescale};
use proptest::prelude::*;

#[test]
fn distance_to_self_is_zero() {
    for m in [corpus::bs24_marked(), corpus::traintrack_tree(2), corpus::reference_point(corpus::rose3(2)).unwrap()] {
        let r = lipschitz_distance(&m, &m).unwrap();
        assert!(r.d_lip.abs() < 1e-12);
        assert!((r.lip - 1.0).abs() < 1e-12);
    }
}

#[test]
fn homothety_is_invisible() {
    let t = corpus::traintrack_tree(2);
    let s = rescale(&t, |_| 5.0).unwrap();
    assert!(lipschitz_distance(&t, &s).unwrap().d_lip.abs() < 1e-12);
}

#[test]
fn translation_distance_is_log_lambda() {
    let axis = gbs_core::axis::Axis::bundled(2).unwrap();
    let t = axis.tree();
    let d = lipschitz_distance(t, &t.twist(axis.phi(), 1).unwrap()).unwrap().d_lip;
    assert!((d - (1.0 + 2f64.sqrt()).ln()).abs() < 1e-9);
}

#[test]
fn rose_cycles_and_shapes() {
    let g = corpus::rose3(2);
    assert_eq!(simple_cycles(&g, 100).unwrap().len(), 3);
    let m = corpus::reference_point(g).unwrap();
    let c = enumerate_candidates(&m).unwrap();
    for s in [Shape::Loop, Shape::FigureEight, Shape::SinglyDegenerateBarbell] {
        assert!(c.iter().any(|x| x.shape == s), "{s:?}");
    }
    assert!(c.iter().all(|x| !x.cyclic.is_elliptic()));
}

#[test]
fn shapes_follow_the_cycle_structure() {
    // Every two embedded cycles of the two-vertex graph share v, so there
    // are no barbells there; the one-loop BS(2,4) needs a turn at both ends.
    let g = corpus::traintrack_graph(2);
    assert_eq!(simple_cycles(&g, 100).unwrap().len(), 4);
    let c = enumerate_candidates(&corpus::traintrack_tree(2)).unwrap();
    assert!(c.iter().all(|x| !matches!(x.shape, Shape::Barbell | Shape::DoublyDegenerateBarbell)));
    assert!(c.iter().any(|x| x.shape == Shape::FigureEight));
    let b = enumerate_candidates(&corpus::bs24_marked()).unwrap();
    assert!(b.iter().any(|x| x.shape == Shape::DoublyDegenerateBarbell));
    assert!(b.iter().all(|x| !matches!(x.shape, Shape::FigureEight | Shape::Barbell)));
}

#[test]
fn parallel_matches_sequential() {
    let t = corpus::traintrack_tree(2);
    let x = random_deform(&t, 6, 9);
    let a = lipschitz_distance_with(&t, &x, Exec::Sequential).unwrap();
    let b = lipschitz_distance_with(&t, &x, Exec::Parallel).unwrap();
    assert_eq!(a.lip, b.lip);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn distance_is_nonnegative_and_dominates_samples(s1 in any::<u64>(), s2 in any::<u64>()) {
        let t = corpus::traintrack_tree(2);
        let x = random_deform(&t, 4, s1);
        let y = random_deform(&t, 4, s2);
        let r = lipschitz_distance(&x, &y).unwrap();
        prop_assert!(r.d_lip >= -1e-9);
        prop_assert!(sup_check_random(&x, &y, 200, s1 ^ s2).unwrap() <= r.lip + 1e-9);
    }

    #[test]
    fn triangle_inequality(s in any::<u64>()) {
        let t = corpus::traintrack_tree(2);
        let x = random_deform(&t, 4, s);
        let y = random_deform(&t, 4, s.wrapping_add(1));
        let z = random_deform(&t, 4, s.wrapping_add(2));
        let d = |a, b| lipschitz_distance(a, b).unwrap().d_lip;
        prop_assert!(d(&x, &z) <= d(&x, &y) + d(&y, &z) + 1e-9);
    }
}
