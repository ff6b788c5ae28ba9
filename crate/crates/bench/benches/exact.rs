use bis_bench::bounded;
use bis_core::exact::exact_count;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn exact(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact_count");
    group.sample_size(10);
    for n in [10, 14, 18, 22] {
        let graph = bounded(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &graph, |b, graph| {
            b.iter(|| exact_count(black_box(&graph.view())).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, exact);
criterion_main!(benches);
