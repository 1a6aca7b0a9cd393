use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use immorder::exec::Execution;
use immorder::order::{all_cyclic_types, leq_matrix, order_graph_with, z4_family};

fn bench_leq_matrix(c: &mut Criterion) {
    let mut group = c.benchmark_group("leq_matrix");
    for (name, types) in [("cyclic_32", all_cyclic_types(32)), ("z4_12", z4_family(12))] {
        for exec in [Execution::Sequential, Execution::Parallel] {
            group.bench_with_input(BenchmarkId::new(format!("{exec:?}"), name), &types, |b, t| {
                b.iter(|| leq_matrix(t, exec))
            });
        }
    }
    group.finish();
}

fn bench_order_graph(c: &mut Criterion) {
    let mut group = c.benchmark_group("order_graph");
    let types = all_cyclic_types(32);
    for exec in [Execution::Sequential, Execution::Parallel] {
        group.bench_function(format!("{exec:?}"), |b| b.iter(|| order_graph_with(&types, exec).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, bench_leq_matrix, bench_order_graph);
criterion_main!(benches);
