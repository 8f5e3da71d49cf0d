//! End-to-end acceptance criteria. Runs without the test harness so each
//! criterion always prints one PASS/FAIL line; exits nonzero on any failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use gbs_core::axis::{
    contraction_experiment, estimate_epsilon0, exponent_coherence, sandwich_fit, Axis, ExperimentConfig,
    ProjectionConfig,
};
use gbs_core::corpus;
use gbs_core::cyclic::{cyclic_reduce, Direction, TurnKey};
use gbs_core::exec::Exec;
use gbs_core::graph::{GbsGraph, VertexId};
use gbs_core::lamination::leaf_library;
use gbs_core::lipschitz::{lipschitz_distance, sup_check_random};
use gbs_core::moves::random_deform;
use gbs_core::sample::{random_loxodromic, random_path};
use gbs_core::whitehead::{cut_analysis, leaf_turn_set, whitehead_graph};
use gbs_core::word::{GroupWord, Letter, Reducer};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, ok: String, bad: String) -> Outcome {
    if cond {
        Ok(ok)
    } else {
        Err(bad)
    }
}

fn c1_train_track() -> Outcome {
    let start = Instant::now();
    let f = corpus::traintrack_map(2);
    let fm = corpus::traintrack_map_minus(2);
    let (vf, vm) = (f.verdict(), fm.verdict());
    if !vf.is_train_track || !vm.is_train_track {
        return Err(format!("verdicts f={} f-={}", vf.is_train_track, vm.is_train_track));
    }
    let g = f.graph();
    let e = |s: &str| g.edge_by_name(s).unwrap();
    let turn = |a: &str, b: &str| {
        TurnKey::new(g, Direction { edge: e(a), residue: 0 }, Direction { edge: e(b), residue: 0 })
    };
    let expected =
        vec![turn("Ea", "ee"), turn("ef", "eb"), turn("ee", "ea"), turn("eb", "ee"), turn("ea", "eb")];
    let (trace, reentry) = f.turn_trace(expected[0]);
    let elapsed = start.elapsed();
    check(
        trace == expected && reentry == 2 && elapsed < Duration::from_secs(1),
        format!("both maps are train tracks; 5-turn trace re-enters at step 2; {elapsed:?}"),
        format!("trace {trace:?} re-entry {reentry} in {elapsed:?}"),
    )
}

fn c2_pf_metric() -> Outcome {
    let f = corpus::traintrack_map(2);
    let (edges, m) = f.transition_matrix();
    let (f2, pf) = f.with_pf_metric(1e-13).map_err(|e| e.to_string())?;
    let v = &pf.lengths;
    let mut res: f64 = 0.0;
    for j in 0..4 {
        let mtv: f64 = (0..4).map(|i| m[i][j] as f64 * v[i]).sum();
        res = res.max((mtv - pf.lambda * v[j]).abs());
    }
    let g = f2.graph();
    let mut rel: f64 = 0.0;
    for &e in &edges {
        let img = f2.edge_image(e).length(g);
        rel = rel.max((img - pf.lambda * g.length(e)).abs() / (pf.lambda * g.length(e)));
    }
    let exact = 1.0 + 2f64.sqrt();
    check(
        res <= 1e-9 && rel <= 1e-9 && (pf.lambda - exact).abs() < 1e-12 && m == corpus_matrix(),
        format!("lambda {:.15}, residual {res:.2e}, edge stretch error {rel:.2e}", pf.lambda),
        format!("lambda {} residual {res} stretch {rel} matrix {m:?}", pf.lambda),
    )
}

/// Counted by hand from the printed edge images; rows and columns ea, eb, ee, ef.
fn corpus_matrix() -> Vec<Vec<u64>> {
    vec![vec![0, 1, 0, 0], vec![0, 1, 1, 0], vec![1, 2, 0, 1], vec![1, 2, 0, 0]]
}

fn c3_legal_growth() -> Outcome {
    let axis = Axis::bundled(2).map_err(|e| e.to_string())?;
    let side = &axis.plus;
    let lambda = side.lambda;
    // Legal loxodromics: every cyclic turn legal in the domain of f.
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut legal = Vec::new();
    for _ in 0..20_000 {
        if legal.len() == 20 {
            break;
        }
        let Some(w) = random_loxodromic(&mut rng, axis.tree(), 6, 2) else { continue };
        let c = cyclic_reduce(side.tt.graph(), &axis.tree().realize(&w).unwrap()).unwrap().0;
        if side.tt.cyclic_illegal_turn_count(&c).unwrap() == 0 && !legal.iter().any(|(d, _)| *d == c) {
            legal.push((c, w));
        }
    }
    if legal.len() < 20 {
        return Err(format!("only {} legal words found", legal.len()));
    }
    let mut worst: f64 = 0.0;
    for (_, w) in &legal {
        let mut o = side.orbit(w, 2_000_000).map_err(|e| e.to_string())?;
        let base = o.norm(0).unwrap();
        for n in 1..=10 {
            let v = o.norm(n).map_err(|e| e.to_string())?;
            worst = worst.max((v / (lambda.powi(n as i32) * base) - 1.0).abs());
        }
    }
    // Words with LEG >= eps: forward iterates of sampled loxodromics.
    let eps = 0.5;
    let sample = axis.sample_loxodromics(200, 5);
    let mut tested = 0;
    let mut violations = 0;
    for g in &sample {
        if tested == 50 {
            break;
        }
        let mut o = side.orbit(g, 2_000_000).map_err(|e| e.to_string())?;
        let Some(j0) = (0..6).find(|&j| o.leg(j).unwrap() >= eps) else { continue };
        tested += 1;
        let base = o.norm(j0).unwrap();
        for n in 1..=8 {
            let v = o.norm(j0 + n).map_err(|e| e.to_string())?;
            if v < eps / 2.0 * lambda.powi(n as i32) * base * (1.0 - 1e-12) {
                violations += 1;
            }
        }
    }
    check(
        worst <= 1e-6 && tested == 50 && violations == 0,
        format!("20 legal words grow by lambda^n (max rel error {worst:.2e}); 50 words with LEG>=0.5, 0 violations"),
        format!("legal error {worst}, tested {tested}, violations {violations}"),
    )
}

fn reduce_letters(g: &GbsGraph, letters: &[Letter]) -> GroupWord {
    let mut r = Reducer::new(g, VertexId(0));
    for l in letters {
        match l {
            Letter::Syl(k) => r.push_syllable(k),
            Letter::Edge(e) => r.push_edge(*e).unwrap(),
        }
    }
    r.finish()
}

fn c4_normal_form_oracle() -> Outcome {
    let mut total = 0;
    let mut agree = 0;
    for (i, g) in [corpus::bs24(), corpus::rose3(2), corpus::traintrack_graph(2)].iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(400 + i as u64);
        for k in 0..10_000 {
            let letters = common::random_letters(&mut rng, g, VertexId(0), 1 + k % 12, 5);
            let fast = reduce_letters(g, &letters);
            total += 1;
            if common::layout(&fast) == common::naive_normal_form(g, VertexId(0), &letters) {
                agree += 1;
            }
        }
    }
    check(agree == total, format!("{agree}/{total} words agree"), format!("{agree}/{total} words agree"))
}

fn c5_metric_axioms() -> Outcome {
    let t = corpus::traintrack_tree(2).normalize_volume();
    let mut min_d = f64::INFINITY;
    let mut worst_tri = f64::NEG_INFINITY;
    for i in 0..50u64 {
        let x = random_deform(&t, 5, 3 * i);
        let y = random_deform(&t, 5, 3 * i + 1);
        let z = random_deform(&t, 5, 3 * i + 2);
        let d = |a, b| lipschitz_distance(a, b).map(|r| r.d_lip).map_err(|e| e.to_string());
        let (xy, yz, xz) = (d(&x, &y)?, d(&y, &z)?, d(&x, &z)?);
        min_d = min_d.min(xy).min(yz).min(xz);
        worst_tri = worst_tri.max(xz - xy - yz);
    }
    let axis = Axis::bundled(2).map_err(|e| e.to_string())?;
    let tpf = axis.tree().clone();
    let d_phi = lipschitz_distance(&tpf, &tpf.twist(axis.phi(), 1).unwrap()).map_err(|e| e.to_string())?.d_lip;
    let target = (1.0 + 2f64.sqrt()).ln();
    check(
        min_d >= -1e-9 && worst_tri <= 1e-9 && (d_phi - target).abs() <= 1e-9,
        format!("min d {min_d:.3e}, worst triangle excess {worst_tri:.3e}, d(T, T.phi) = {d_phi:.15}"),
        format!("min d {min_d}, triangle excess {worst_tri}, d(T, T.phi) = {d_phi} vs {target}"),
    )
}

fn c6_candidate_supremacy() -> Outcome {
    let t = corpus::traintrack_tree(2);
    let phi = corpus::phi(2);
    let mut worst = f64::NEG_INFINITY;
    for i in 0..20u64 {
        let x = random_deform(&t, 4, 600 + i);
        let k = 1 + (i % 3) as i64;
        let k = if i % 2 == 0 { k } else { -k };
        let y = x.twist(&phi, k).map_err(|e| e.to_string())?;
        let lip = lipschitz_distance(&x, &y).map_err(|e| e.to_string())?.lip;
        let sup = sup_check_random(&x, &y, 1000, 700 + i).map_err(|e| e.to_string())?;
        worst = worst.max(sup - lip);
    }
    check(
        worst <= 1e-9,
        format!("largest sampled excess over the candidate maximum {worst:.3e}"),
        format!("sampled stretch exceeds the candidate maximum by {worst}"),
    )
}

fn c7_illegal_turns() -> Outcome {
    let f = corpus::traintrack_map(2);
    let g = f.graph().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut violations = 0;
    for i in 0..200 {
        let start = VertexId(i % 2);
        let sigma = random_path(&mut rng, &g, start, 2 + i % 9, 3);
        let image = f.iterate(&sigma, 1).map_err(|e| e.to_string())?;
        if f.illegal_turn_count(&image) > f.illegal_turn_count(&sigma) {
            violations += 1;
        }
    }
    check(violations == 0, "200 paths, 0 violations".into(), format!("{violations} violations"))
}

fn c8_whitehead() -> Outcome {
    let f = corpus::traintrack_map(2);
    let g = f.graph();
    let lib = leaf_library(&f, 6).map_err(|e| e.to_string())?;
    let turns = leaf_turn_set(g, &lib);
    let mut parts = Vec::new();
    let mut ok = true;
    for v in g.vertices() {
        let a = cut_analysis(&whitehead_graph(g, &turns, v));
        ok &= a.connected;
        parts.push(format!("{}: connected={} cut={:?}", g.vertex_name(v), a.connected, a.cut_vertices));
    }
    check(ok, parts.join("; "), parts.join("; "))
}

fn c9_exponents() -> Outcome {
    let axis = Axis::bundled(2).map_err(|e| e.to_string())?;
    let sample = axis.sample_loxodromics(200, 7);
    let eps = estimate_epsilon0(&axis, &sample, 6, 2_000_000, Exec::default()).map_err(|e| e.to_string())?;
    let cfg = ProjectionConfig { epsilon0: eps.epsilon0, ..ProjectionConfig::default() };
    let rep = exponent_coherence(&axis, &sample[..50], &cfg, Exec::default()).map_err(|e| e.to_string())?;
    check(
        eps.epsilon0 > 0.0 && eps.n <= 6 && rep.n <= 10,
        format!("epsilon0 {} at N={}, max |k+ - k-| = {}", eps.epsilon0, eps.n, rep.n),
        format!("epsilon0 {} at N={}, max |k+ - k-| = {}", eps.epsilon0, eps.n, rep.n),
    )
}

fn c10_sandwich() -> Outcome {
    let axis = Axis::bundled(2).map_err(|e| e.to_string())?;
    let sample = axis.sample_loxodromics(200, 7);
    let eps = estimate_epsilon0(&axis, &sample, 6, 2_000_000, Exec::default()).map_err(|e| e.to_string())?;
    let cfg = ProjectionConfig { epsilon0: eps.epsilon0, ..ProjectionConfig::default() };
    let rep = sandwich_fit(&axis, &sample[..50], &cfg, Exec::default()).map_err(|e| e.to_string())?;
    let worst = rep.residuals.iter().cloned().fold(0.0, f64::max);
    check(
        rep.c <= 1e3 && rep.residuals.len() == 50,
        format!("C = {:.4} over {} grid points, largest log residual {worst:.4}", rep.c, rep.points),
        format!("C = {} with {} residuals", rep.c, rep.residuals.len()),
    )
}

fn c11_contraction() -> Outcome {
    let start = Instant::now();
    let axis = Axis::bundled(2).map_err(|e| e.to_string())?;
    let cfg = ExperimentConfig { balls: 200, ..ExperimentConfig::default() };
    let a = contraction_experiment(&axis, &cfg, Exec::default()).map_err(|e| e.to_string())?;
    let b = contraction_experiment(&axis, &cfg, Exec::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let balls = a.rows.len();
    let disjoint = a.rows.iter().all(|r| r.radius <= r.axis_distance);
    let deterministic = a.to_csv() == b.to_csv();
    check(
        balls >= 200
            && disjoint
            && deterministic
            && a.c_projections1.is_some()
            && a.c_projections2.is_some()
            && elapsed < Duration::from_secs(600),
        format!(
            "{balls} balls, deterministic, defect constants {:?} / {:?} ({} pairs), slopes {:?}, {elapsed:?}",
            a.c_projections1, a.c_projections2, a.pairs_projections2, a.slopes
        ),
        format!(
            "{balls} balls, disjoint {disjoint}, deterministic {deterministic}, constants {:?} / {:?}, {elapsed:?}",
            a.c_projections1, a.c_projections2
        ),
    )
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("1 train-track certification", c1_train_track),
        ("2 PF metric", c2_pf_metric),
        ("3 legal growth", c3_legal_growth),
        ("4 normal-form oracle", c4_normal_form_oracle),
        ("5 metric axioms", c5_metric_axioms),
        ("6 candidate supremacy", c6_candidate_supremacy),
        ("7 illegal-turn monotonicity", c7_illegal_turns),
        ("8 Whitehead graphs of the stable lamination", c8_whitehead),
        ("9 exponent coherence", c9_exponents),
        ("10 sandwich fit", c10_sandwich),
        ("11 contraction report", c11_contraction),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        let out = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match out {
            Ok(msg) => println!("PASS criterion {name}: {msg}"),
            Err(msg) => {
                println!("FAIL criterion {name}: {msg}");
                failed.push(name);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
