//! Parallel and sequential execution of the data-parallel kernels.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gbs_core::axis::{contraction_experiment, estimate_epsilon0, Axis, ExperimentConfig, ProjectionConfig};
use gbs_core::corpus;
use gbs_core::exec::Exec;
use gbs_core::lamination::leaf_library_with;
use gbs_core::lipschitz::{candidate_ratios, enumerate_candidates};
use gbs_core::moves::random_deform;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn candidates(c: &mut Criterion) {
    let t = corpus::traintrack_tree(2);
    let x = random_deform(&t, 6, 11);
    let y = x.twist(&corpus::phi(2), 3).unwrap();
    let cands = enumerate_candidates(&x).unwrap();
    let tr = x.transport_to(&y).unwrap();
    let mut g = c.benchmark_group("candidate_ratios");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| candidate_ratios(&cands, &x, &tr, exec).unwrap())
        });
    }
    g.finish();
}

fn library(c: &mut Criterion) {
    let f = corpus::traintrack_map(2);
    let mut g = c.benchmark_group("leaf_library_k8");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| leaf_library_with(&f, 8, exec).unwrap()));
    }
    g.finish();
}

fn epsilon(c: &mut Criterion) {
    let axis = Axis::bundled(2).unwrap();
    let sample = axis.sample_loxodromics(100, 7);
    let mut g = c.benchmark_group("estimate_epsilon0");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| estimate_epsilon0(&axis, &sample, 5, 2_000_000, exec).unwrap())
        });
    }
    g.finish();
}

fn experiment(c: &mut Criterion) {
    let axis = Axis::bundled(2).unwrap();
    let cfg = ExperimentConfig {
        balls: 16,
        projection: ProjectionConfig { epsilon0: 1.0, ..ProjectionConfig::default() },
        ..ExperimentConfig::default()
    };
    let mut g = c.benchmark_group("contraction_experiment");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| contraction_experiment(&axis, &cfg, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, candidates, library, epsilon, experiment);
criterion_main!(benches);
