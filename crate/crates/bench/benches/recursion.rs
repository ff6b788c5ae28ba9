use bis_bench::{bounded, heavy};
use bis_core::fptas::{estimate_log_count, DepthBudget};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn by_depth(c: &mut Criterion) {
    let mut group = c.benchmark_group("log_count_by_depth");
    group.sample_size(10);
    for (name, graph) in [("bounded", bounded(200)), ("heavy", heavy(200))] {
        for depth in 1..=4 {
            group.bench_with_input(BenchmarkId::new(name, depth), &depth, |b, &depth| {
                b.iter(|| estimate_log_count(black_box(&graph), DepthBudget(depth)))
            });
        }
    }
    group.finish();
}

fn by_size(c: &mut Criterion) {
    let mut group = c.benchmark_group("log_count_by_size");
    group.sample_size(10);
    for n in [100, 300, 1000] {
        let graph = bounded(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &graph, |b, graph| {
            b.iter(|| estimate_log_count(black_box(graph), DepthBudget(3)))
        });
    }
    group.finish();
}

criterion_group!(benches, by_depth, by_size);
criterion_main!(benches);
