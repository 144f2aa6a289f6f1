use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use roleprox::diagnostics::scenario_suite_with;
use roleprox::generators::{gen_barbell, gen_block_chung_lu, ChungLuConfig};
use roleprox::graphlets::count_orbits_with;
use roleprox::walks::{estimate_containment_with, sample_walks_with, ContainmentOptions, WalkConfig, WalksPerNode};
use roleprox::Exec;

const EXECS: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn walks(c: &mut Criterion) {
    let g = gen_block_chung_lu(&ChungLuConfig::new(vec![500, 500], 0.9, 1.7, 1)).unwrap().graph;
    let cfg = WalkConfig { length: 40, walks_per_node: WalksPerNode::Fixed(10), seed: 1 };
    let mut group = c.benchmark_group("sample_walks");
    for (name, exec) in EXECS {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| sample_walks_with(black_box(&g), &cfg, exec).unwrap())
        });
    }
    group.finish();
}

fn containment(c: &mut Criterion) {
    let (g, cliques) = gen_barbell(5).unwrap();
    let members = cliques.classes()[0].clone();
    let mut group = c.benchmark_group("containment");
    for (name, exec) in EXECS {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                estimate_containment_with(black_box(&g), &members, 8, 100_000, 3, ContainmentOptions::default(), exec)
                    .unwrap()
            })
        });
    }
    group.finish();
}

fn orbits(c: &mut Criterion) {
    let g = gen_block_chung_lu(&ChungLuConfig::new(vec![1000, 1000], 0.9, 1.7, 2)).unwrap().graph;
    let mut group = c.benchmark_group("count_orbits");
    for (name, exec) in EXECS {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| count_orbits_with(black_box(&g), exec))
        });
    }
    group.finish();
}

fn suite(c: &mut Criterion) {
    let mut group = c.benchmark_group("scenario_suite");
    group.sample_size(10);
    for (name, exec) in EXECS {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| scenario_suite_with(black_box(0), exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, walks, containment, orbits, suite);
criterion_main!(benches);
