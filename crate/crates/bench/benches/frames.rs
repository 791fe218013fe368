use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use cstar_frames::random::{self, rng_from_seed};
use cstar_frames::{
    douglas_report, optimal_kframe_lower_bound, random_frame, run_property_suite, AlgebraSpec, SuiteConfig, SuiteId,
};

fn specs() -> Vec<(&'static str, AlgebraSpec)> {
    vec![
        ("C", AlgebraSpec::scalar()),
        ("M3", AlgebraSpec::matrix(3).unwrap()),
        ("C+M2", AlgebraSpec::new(vec![1, 2]).unwrap()),
    ]
}

fn frame_bounds(c: &mut Criterion) {
    let mut group = c.benchmark_group("optimal_frame_bounds");
    for (name, spec) in specs() {
        let frame = random_frame(&spec, 4, 8, 1, 1e-3).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(name), &frame, |b, f| {
            b.iter(|| black_box(f.optimal_frame_bounds()))
        });
    }
    group.finish();
}

fn canonical_dual(c: &mut Criterion) {
    let mut group = c.benchmark_group("canonical_dual");
    for (name, spec) in specs() {
        let frame = random_frame(&spec, 4, 8, 2, 1e-3).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(name), &frame, |b, f| {
            b.iter(|| black_box(f.canonical_dual(1e-8).unwrap()))
        });
    }
    group.finish();
}

fn douglas(c: &mut Criterion) {
    let mut group = c.benchmark_group("douglas_report");
    for (name, spec) in specs() {
        let mut rng = rng_from_seed(3);
        let t = random::random_factored_operator(&spec, 4, 4, 2, &mut rng);
        let s = t.compose(&random::random_operator(&spec, 3, 4, &mut rng)).unwrap();
        group.bench_function(name, |b| b.iter(|| black_box(douglas_report(&s, &t, 1e-8).unwrap())));
    }
    group.finish();
}

fn kframe_bound(c: &mut Criterion) {
    let spec = AlgebraSpec::new(vec![1, 2]).unwrap();
    let frame = random_frame(&spec, 4, 8, 4, 1e-3).unwrap();
    let k = random::random_operator(&spec, 4, 4, &mut rng_from_seed(4));
    c.bench_function("optimal_kframe_lower_bound", |b| {
        b.iter(|| black_box(optimal_kframe_lower_bound(&frame, &k, 1e-8).unwrap()))
    });
}

fn suite(c: &mut Criterion) {
    let cfg = SuiteConfig {
        trials: 10,
        suites: vec![SuiteId::DouglasFourway, SuiteId::ScalarRegression],
        ..SuiteConfig::default()
    };
    let mut group = c.benchmark_group("property_suite");
    group.sample_size(10);
    group.bench_function("douglas+scalar x10", |b| {
        b.iter(|| black_box(run_property_suite(&cfg).unwrap()))
    });
    group.finish();
}

criterion_group!(benches, frame_bounds, canonical_dual, douglas, kframe_bound, suite);
criterion_main!(benches);
