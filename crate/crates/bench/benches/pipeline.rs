use std::hint::black_box;

use bsi_core::{
    all_baselines, best_of_restarts, bsi, build_allocation_dataset, evaluate_partition,
    sample_mixture, AllocationScenario, Distribution, GaussScenario, GeometricMeasure,
    KMeansConfig, Objective,
};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn index(c: &mut Criterion) {
    let p = Distribution::from_masses(&[5.0, 1.0, 3.0, 0.0, 2.0, 8.0, 1.0, 4.0]).unwrap();
    let q = Distribution::from_masses(&[1.0, 1.0, 2.0, 3.0, 5.0, 8.0, 13.0, 21.0]).unwrap();
    c.bench_function("bsi/k=8", |b| b.iter(|| bsi(black_box(&p), black_box(&q)).unwrap()));
}

fn geometry(c: &mut Criterion) {
    let mut group = c.benchmark_group("evaluate_partition");
    for n in [1_000, 10_000, 100_000] {
        let ds = sample_mixture(&GaussScenario::Imbalanced.spec(n, 0)).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &ds, |b, ds| {
            b.iter(|| evaluate_partition(ds, GeometricMeasure::Spread).unwrap())
        });
    }
    group.finish();
}

fn clustering(c: &mut Criterion) {
    let ds = sample_mixture(&GaussScenario::Balanced.spec(900, 0)).unwrap();
    let mut group = c.benchmark_group("kmeans/n=900");
    for objective in [Objective::MinInertia, Objective::MaxBsi] {
        let cfg = KMeansConfig::new(3).restarts(20).seed(1);
        group.bench_function(format!("{objective:?}"), |b| {
            b.iter(|| best_of_restarts(ds.points(), &cfg, objective).unwrap())
        });
    }
    group.finish();
    c.bench_function("baselines/n=900", |b| b.iter(|| all_baselines(&ds).unwrap()));
}

fn allocation(c: &mut Criterion) {
    let s = AllocationScenario::new(AllocationScenario::skewed_population(), 0.0, 50_000, 2, 0).unwrap();
    c.bench_function("allocation/build+score n=50000", |b| {
        b.iter(|| {
            let ds = build_allocation_dataset(&s).unwrap();
            evaluate_partition(&ds, GeometricMeasure::Spread).unwrap()
        })
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = index, geometry, clustering, allocation
}
criterion_main!(benches);
