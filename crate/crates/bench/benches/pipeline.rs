use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use treecover::exact_cover::exact_cover;
use treecover::forest_cover::cover_hierarchy;
use treecover::generate::{grid, Weights};
use treecover::mult::{multiplicative_cover, MultParams};
use treecover::oracle::build_oracle;
use treecover::partition::build_partition;
use treecover::sssp::{diameter, dijkstra};
use treecover::tw_embed::embed;
use treecover::tw_partition::tw_partition;
use treecover_bench::{series_parallel_graph, triangulation, weighted_grid};

fn sssp(c: &mut Criterion) {
    let inst = weighted_grid(40);
    c.bench_function("dijkstra/grid40", |b| b.iter(|| dijkstra(&inst.graph, black_box(0), None, None)));
}

fn additive(c: &mut Criterion) {
    let mut group = c.benchmark_group("additive");
    group.sample_size(10);
    for side in [10, 20] {
        let inst = weighted_grid(side);
        let delta = diameter(&inst.graph, true);
        for eps in [0.5, 0.25] {
            group.bench_with_input(BenchmarkId::new(format!("grid{side}"), eps), &eps, |b, &eps| {
                b.iter(|| {
                    let sp = build_partition(&inst.graph, &inst.embedding, eps, 0.125, delta).unwrap();
                    cover_hierarchy(&inst.graph, &sp.hierarchy, &sp.partition).unwrap()
                })
            });
        }
    }
    group.finish();
}

fn exact(c: &mut Criterion) {
    let inst = grid(3, 4, Weights::Unit, 0).unwrap();
    let mut group = c.benchmark_group("exact");
    group.sample_size(10);
    group.bench_function("grid3x4", |b| b.iter(|| exact_cover(&inst.graph, 5, 1_000_000).unwrap()));
    group.finish();
}

fn multiplicative(c: &mut Criterion) {
    let inst = triangulation(100);
    let mut group = c.benchmark_group("multiplicative");
    group.sample_size(10);
    group.bench_function("tri100", |b| {
        b.iter(|| multiplicative_cover(&inst.graph, &inst.embedding, MultParams::new(0.5, 1)).unwrap())
    });
    group.finish();
}

fn treewidth(c: &mut Criterion) {
    let (g, td) = series_parallel_graph(300);
    let delta = diameter(&g, true);
    let inst = triangulation(150);
    let tri_delta = diameter(&inst.graph, true);
    let mut group = c.benchmark_group("treewidth");
    group.sample_size(10);
    group.bench_function("partition/sp300", |b| b.iter(|| tw_partition(&g, &td, 0.25, delta).unwrap()));
    group.bench_function("embed/tri150", |b| b.iter(|| embed(&inst.graph, &inst.embedding, 0.5, tri_delta).unwrap()));
    group.finish();
}

fn queries(c: &mut Criterion) {
    let inst = triangulation(100);
    let m = multiplicative_cover(&inst.graph, &inst.embedding, MultParams::new(0.5, 1)).unwrap();
    let oracle = build_oracle(&m.cover).unwrap();
    let n = inst.graph.n();
    c.bench_function("oracle/query", |b| {
        let mut k = 0usize;
        b.iter(|| {
            k = (k + 7919) % (n * n);
            oracle.query(k / n, k % n).unwrap()
        })
    });
}

criterion_group!(benches, sssp, additive, exact, multiplicative, treewidth, queries);
criterion_main!(benches);
