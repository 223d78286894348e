use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use netdiscern::atlas::build_atlas;
use netdiscern::discern::{analyze_network, check_augmented_pbh, check_theorem_eigenspace, Method, Settings};
use netdiscern::fixtures;
use netdiscern::model::assemble;
use netdiscern::numlin::{eig, expm, to_complex};
use netdiscern_bench::{chorded_path, ring};
use std::hint::black_box;

fn examples(c: &mut Criterion) {
    let settings = Settings::default();
    let mut g = c.benchmark_group("examples");
    for (name, spec) in [
        ("example1", fixtures::example1()),
        ("example2", fixtures::example2()),
        ("example3", fixtures::example3()),
    ] {
        g.bench_function(name, |b| {
            b.iter(|| analyze_network(black_box(&spec), &settings, Method::Both).unwrap())
        });
    }
    g.finish();
}

fn scaling(c: &mut Criterion) {
    let settings = Settings::default();
    let mut g = c.benchmark_group("scaling");
    g.sample_size(10);
    for nodes in [4, 8, 16] {
        let spec = chorded_path(nodes);
        let pair = assemble(&spec).unwrap();
        g.bench_with_input(BenchmarkId::new("eigenspace", nodes), &pair, |b, p| {
            b.iter(|| check_theorem_eigenspace(p, &settings))
        });
        g.bench_with_input(BenchmarkId::new("augmented_pbh", nodes), &pair, |b, p| {
            b.iter(|| check_augmented_pbh(p, &settings))
        });
        g.bench_with_input(BenchmarkId::new("atlas", nodes), &spec, |b, s| {
            b.iter(|| build_atlas(&s.l, &s.a, &s.h, settings.tol).unwrap())
        });
    }
    g.finish();
}

fn kernels(c: &mut Criterion) {
    let pair = assemble(&ring(16)).unwrap();
    let phi = to_complex(&pair.phi);
    c.bench_function("eig_ring16", |b| b.iter(|| eig(black_box(&phi), 1e-8).unwrap()));
    c.bench_function("expm_ring16", |b| b.iter(|| expm(black_box(&pair.phi), 0.1).unwrap()));
}

criterion_group!(benches, examples, scaling, kernels);
criterion_main!(benches);
