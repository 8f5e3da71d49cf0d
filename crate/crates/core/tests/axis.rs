use gbs_core::axis::{
    contraction_experiment, estimate_epsilon0, legality_exponents, project_tree, theta_of_element, Axis,
    ExperimentConfig, ProjectionConfig,
};
use gbs_core::exec::Exec;
use gbs_core::graph::VertexId;
use gbs_core::word::GroupWord;
use proptest::prelude::*;
use std::sync::OnceLock;

fn axis() -> &'static Axis {
    static A: OnceLock<Axis> = OnceLock::new();
    A.get_or_init(|| Axis::bundled(2).unwrap())
}

fn cfg() -> ProjectionConfig {
    ProjectionConfig { epsilon0: 1.0, ..ProjectionConfig::default() }
}

#[test]
fn both_sides_share_lambda() {
    let a = axis();
    assert!((a.plus.lambda - (1.0 + 2f64.sqrt())).abs() < 1e-12);
    assert!((a.minus.lambda - a.plus.lambda).abs() < 1e-12);
    assert!(a.plus.kappa > 0.0 && a.plus.min_edge > 0.0);
}

#[test]
fn step_function_grid() {
    let a = axis();
    let l = a.log_lambda();
    assert_eq!(a.step_of(0.0), 0);
    assert_eq!(a.step_of(0.49 * l), 0);
    assert_eq!(a.step_of(-1.2 * l), -1);
    assert_eq!(a.delta(&ProjectionConfig::default()), l / 8.0);
    assert_eq!(a.point(2.0 * l).unwrap().n, 2);
}

#[test]
fn step_distances() {
    let a = axis();
    let l = a.log_lambda();
    assert_eq!(a.step_distance(0, 1_000_000).unwrap(), 0.0);
    for m in 1..=3 {
        assert!((a.step_distance(m, 1_000_000).unwrap() - m as f64 * l).abs() < 1e-9);
    }
    assert!(a.step_distance(-1, 1_000_000).unwrap() >= l - 1e-9);
}

#[test]
fn translates_project_to_their_step() {
    let a = axis();
    for k in -2..=2 {
        let x = a.tree().twist(a.phi(), k).unwrap();
        let p = project_tree(a, &x, &cfg(), Exec::default()).unwrap();
        assert_eq!(p.n_x, k);
        let at = p.curve.iter().find(|c| c.0 == k).unwrap().1;
        assert!(at.abs() < 1e-9);
    }
}

#[test]
fn legal_generator_has_exponents_near_zero() {
    let a = axis();
    let rg = a.phi().presentation().graph();
    let r = GroupWord::parse(rg, VertexId(0), &["r"]).unwrap();
    let e = legality_exponents(a, &r, &cfg()).unwrap();
    assert!(e.k_plus <= e.k_minus + 4 && e.k_minus <= e.k_plus + 4);
    let th = theta_of_element(a, &r, &cfg()).unwrap();
    assert!(th.t_lo <= th.t_hi && th.diameter >= 0.0);
    let u = GroupWord::parse(rg, VertexId(0), &["u"]).unwrap();
    assert!(legality_exponents(a, &u, &cfg()).is_err());
}

#[test]
fn config_validation_and_defaults() {
    let bad = ProjectionConfig { epsilon0: 0.0, ..ProjectionConfig::default() };
    assert!(bad.validate().is_err());
    let bad = ProjectionConfig { k_min: 1, ..ProjectionConfig::default() };
    assert!(bad.validate().is_err());
    let c: ExperimentConfig = serde_json::from_str("{\"balls\": 12}").unwrap();
    assert_eq!(c.balls, 12);
    assert_eq!(c.projection, ProjectionConfig::default());
}

#[test]
fn epsilon_estimate_is_exec_independent() {
    let a = axis();
    let s = a.sample_loxodromics(30, 3);
    let p = estimate_epsilon0(a, &s, 4, 1_000_000, Exec::Parallel).unwrap();
    let q = estimate_epsilon0(a, &s, 4, 1_000_000, Exec::Sequential).unwrap();
    assert_eq!(p.per_n, q.per_n);
    assert!(p.epsilon0 > 0.0);
}

#[test]
fn small_experiment_is_deterministic() {
    let a = axis();
    let c = ExperimentConfig { balls: 8, projection: cfg(), ..ExperimentConfig::default() };
    let r1 = contraction_experiment(a, &c, Exec::Parallel).unwrap();
    let r2 = contraction_experiment(a, &c, Exec::Sequential).unwrap();
    assert_eq!(r1.to_csv(), r2.to_csv());
    assert!(r1.rows.len() >= 8);
    assert!(r1.rows.iter().all(|r| r.radius <= r.axis_distance && r.projected_diameter >= 0.0));
    assert!(r1.to_csv().starts_with("center,center_t,axis_distance,radius,members,projected_diameter\n"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn orbit_norms_are_phi_equivariant(seed in any::<u64>()) {
        let a = axis();
        let Some(g) = a.sample_loxodromics(1, seed).pop() else { return Ok(()) };
        let mut o = a.plus.orbit(&g, 1_000_000).unwrap();
        let pg = a.phi().apply(&g).unwrap();
        let mut op = a.plus.orbit(&pg, 1_000_000).unwrap();
        for j in -2..=2 {
            prop_assert!((o.norm(j + 1).unwrap() - op.norm(j).unwrap()).abs() < 1e-9);
        }
    }
}
