use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ofdma_varalloc::allocator::{
    allocate_best_gain, allocate_decentralized, allocate_superiority, allocate_variance, FairnessWeights,
};
use ofdma_varalloc::channel::{gen_iid_exp_snr, GroupMap};
use ofdma_varalloc::link::{group_stats, report_set, LinkParams, ReportSet};
use ofdma_varalloc::sim::{run_slot, SimConfig};
use std::hint::black_box;

fn reports(users: usize) -> (ReportSet, FairnessWeights) {
    let map = GroupMap::new(128, 4).unwrap();
    let snr = gen_iid_exp_snr(users, 128, 10.0, 1).unwrap();
    let stats = group_stats(&snr, &map, &LinkParams::with_gap(1.0).unwrap()).unwrap();
    (report_set(&stats, 0.5).unwrap(), FairnessWeights::uniform(users).unwrap())
}

fn allocators(c: &mut Criterion) {
    let mut group = c.benchmark_group("allocate");
    for users in [8, 24] {
        let (r, w) = reports(users);
        group.bench_with_input(BenchmarkId::new("variance", users), &users, |b, _| {
            b.iter(|| allocate_variance(black_box(&r), &w, None, None).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("best_gain", users), &users, |b, _| {
            b.iter(|| allocate_best_gain(black_box(&r), None).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("decentralized", users), &users, |b, _| {
            b.iter(|| allocate_decentralized(black_box(&r), &w).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("superiority", users), &users, |b, _| {
            b.iter(|| allocate_superiority(black_box(&r), &w).unwrap())
        });
    }
    group.finish();
}

fn slot(c: &mut Criterion) {
    let config = SimConfig::reference();
    c.bench_function("reference_slot", |b| b.iter(|| run_slot(&config, 10.0, black_box(3)).unwrap()));
}

criterion_group!(benches, allocators, slot);
criterion_main!(benches);
