use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use cuttree::{generate, gomory_hu, gusfield, oc_gomory_hu, GenSpec, Graph, PairHeuristic};

const INSTANCES: &[&str] = &[
    "cycle:n=512,w=1..1000,seed=1",
    "wheel:n=256,w=1..1000,seed=1",
    "path_like:n=500,k=2,seed=1",
    "random_gnm:n=150,d=20,seed=1",
    "knn_points:n=500,k=4,seed=1",
];

fn instance(spec: &str) -> Graph {
    let spec: GenSpec = spec.parse().unwrap();
    generate(&spec).unwrap().graph
}

fn cut_trees(c: &mut Criterion) {
    let mut group = c.benchmark_group("cut_tree");
    group.sample_size(10);
    for spec in INSTANCES {
        let g = instance(spec);
        let family = spec.split(':').next().unwrap();
        group.bench_with_input(BenchmarkId::new("GH_h", family), &g, |b, g| {
            b.iter(|| gomory_hu(g, PairHeuristic::Heaviest).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("GH_r", family), &g, |b, g| {
            b.iter(|| gomory_hu(g, PairHeuristic::Reuse).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("Gusfield", family), &g, |b, g| {
            b.iter(|| gusfield(g).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("OC", family), &g, |b, g| {
            b.iter(|| oc_gomory_hu(g).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, cut_trees);
criterion_main!(benches);
