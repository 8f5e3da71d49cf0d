use gbs_core::corpus;
use gbs_core::cyclic::cyclic_reduce;
use gbs_core::graph::VertexId;
use gbs_core::pf::{char_poly, is_primitive, largest_real_root, left_residual, perron_frobenius};
use gbs_core::sample::random_path;
use gbs_core::traintrack::{is_legal_path, TrainTrackMap};
use gbs_core::word::GroupWord;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SQRT2: f64 = std::f64::consts::SQRT_2;

fn matrix() -> Vec<Vec<u64>> {
    // Counted from the printed edge images, rows and columns ea, eb, ee, ef.
    vec![vec![0, 1, 0, 0], vec![0, 1, 1, 0], vec![1, 2, 0, 1], vec![1, 2, 0, 0]]
}

#[test]
fn transition_matrix_matches_the_edge_images() {
    let f = corpus::traintrack_map(2);
    let (edges, m) = f.transition_matrix();
    let names: Vec<_> = edges.iter().map(|&e| f.graph().edge_name(e)).collect();
    assert_eq!(names, ["ea", "eb", "ee", "ef"]);
    assert_eq!(m, matrix());
    assert!(is_primitive(&m));
}

#[test]
fn characteristic_polynomial() {
    // (x² − 2x − 1)(x² + x + 1), expanded by hand.
    let m: Vec<Vec<f64>> = matrix().iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
    let c = char_poly(&m);
    for (a, b) in c.iter().zip([1.0, -1.0, -2.0, -3.0, -1.0]) {
        assert!((a - b).abs() < 1e-9, "{c:?}");
    }
    assert!((largest_real_root(&c) - (1.0 + SQRT2)).abs() < 1e-9);
}

#[test]
fn pf_lengths_are_exact() {
    let exact = [(8.0 - 5.0 * SQRT2) / 7.0, (1.0 + 2.0 * SQRT2) / 7.0, (3.0 - SQRT2) / 7.0, (4.0 * SQRT2 - 5.0) / 7.0];
    let (lambda, v) = perron_frobenius(&matrix(), 1e-14).unwrap();
    assert!((lambda - (1.0 + SQRT2)).abs() < 1e-12);
    for (a, b) in v.iter().zip(exact) {
        assert!((a - b).abs() < 1e-12);
    }
    assert!(left_residual(&matrix(), lambda, &v) < 1e-12);
    let pf = corpus::traintrack_map(2).pf_metric(1e-13).unwrap();
    for (a, b) in pf.lengths.iter().zip(exact) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn non_primitive_matrix_is_detected() {
    assert!(!is_primitive(&[vec![0, 1], vec![1, 0]]));
    assert!(is_primitive(&[vec![1, 1], vec![1, 0]]));
}

#[test]
fn both_representatives_are_train_tracks() {
    for f in [corpus::traintrack_map(2), corpus::traintrack_map_minus(2), corpus::traintrack_map(3)] {
        let v = f.verdict();
        assert!(v.is_train_track);
        assert!(v.illegal_taken.is_empty());
        assert!(v.vertices_with_one_gate.is_empty());
        for gates in &v.gates.gates {
            assert!(gates.len() >= 2);
        }
        for e in f.graph().edges() {
            assert_eq!(f.correction(e), &0.into());
        }
    }
}

#[test]
fn edge_images_are_legal_and_stretch_by_lambda() {
    let f = corpus::traintrack_map(2);
    let (f, pf) = f.with_pf_metric(1e-13).unwrap();
    let g = f.graph();
    for e in g.edges() {
        let img = f.edge_image(e);
        assert!(is_legal_path(&f, img));
        assert!((img.length(g) - pf.lambda * g.length(e)).abs() < 1e-12);
        let f3 = f.iterate(&GroupWord::from_edges(g, g.origin(e), &[e]).unwrap(), 3).unwrap();
        assert!((f3.length(g) - pf.lambda.powi(3) * g.length(e)).abs() < 1e-10);
    }
}

#[test]
fn phi_on_the_domain_matches_the_automorphism() {
    let f = corpus::traintrack_map(2);
    let m = f.domain();
    let rg = m.reference().graph();
    for s in ["r", "s", "t", "u", "r s T"] {
        let w = GroupWord::parse(rg, VertexId(0), &[s]).unwrap();
        let lhs = cyclic_reduce(f.graph(), &f.phi_domain(&m.realize(&w).unwrap()).unwrap()).unwrap().0;
        let rhs = cyclic_reduce(f.graph(), &m.realize(&f.phi().apply(&w).unwrap()).unwrap()).unwrap().0;
        assert_eq!(lhs.translation_length(f.graph()), rhs.translation_length(f.graph()));
    }
}

#[test]
fn constants_relations() {
    let f = corpus::traintrack_map(2);
    let (f, pf) = f.with_pf_metric(1e-13).unwrap();
    let c = f.constants(pf.lambda);
    assert!(c.bcc >= 0.0);
    assert!((c.c_f - 2.0 * c.bcc / (pf.lambda - 1.0)).abs() < 1e-15);
    assert_eq!(c.kappa, 2.0 * c.c_f);
}

#[test]
fn legality_ratio_bounds() {
    let f = corpus::traintrack_map(2);
    let g = f.graph();
    let w = GroupWord::parse(g, VertexId(0), &["ea"]).unwrap();
    let c = cyclic_reduce(g, &w).unwrap().0;
    assert_eq!(f.legality_ratio(&c, 0.0).unwrap(), 1.0);
}

fn check_monotone(f: &TrainTrackMap, seed: u64, len: usize) -> Result<(), TestCaseError> {
    let g = f.graph().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sigma = random_path(&mut rng, &g, VertexId((seed % 2) as usize), len, 3);
    let image = f.iterate(&sigma, 1).unwrap();
    prop_assert!(f.illegal_turn_count(&image) <= f.illegal_turn_count(&sigma));
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn illegal_turns_do_not_increase(seed in any::<u64>(), len in 1usize..12) {
        check_monotone(&corpus::traintrack_map(2), seed, len)?;
        check_monotone(&corpus::traintrack_map_minus(2), seed, len)?;
    }

    #[test]
    fn df_preserves_gates(seed in any::<u64>()) {
        let f = corpus::traintrack_map(2);
        let turns = f.all_turns();
        let t = turns[(seed as usize) % turns.len()];
        if f.same_gate(t.a, t.b) {
            prop_assert!(f.same_gate(f.df(t.a), f.df(t.b)));
        }
        if f.is_legal(&t) {
            prop_assert!(f.is_legal(&f.df_turn(&t)));
        }
    }
}
