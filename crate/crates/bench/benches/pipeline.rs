use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use glyphnet_bench::null_corpus;
use glyphnet_core::cores::core_profile;
use glyphnet_core::ensemble::ShufflePlan;
use glyphnet_core::segment::mean_tree_height;
use glyphnet_core::significance::pair_zscores;
use glyphnet_core::{CoreMode, Direction, SignNetwork};

fn network(c: &mut Criterion) {
    let corpus = null_corpus(600, 1800, 1);
    c.bench_function("build_network", |b| {
        b.iter(|| SignNetwork::build(black_box(&corpus)))
    });
    let net = SignNetwork::build(&corpus);
    c.bench_function("reciprocity", |b| b.iter(|| black_box(&net).reciprocity()));
}

fn cores(c: &mut Criterion) {
    let net = SignNetwork::build(&null_corpus(600, 1800, 2));
    c.bench_function("k_core_profile_in", |b| {
        b.iter(|| core_profile(black_box(&net), Direction::In, CoreMode::Degree))
    });
    c.bench_function("s_core_profile_out", |b| {
        b.iter(|| core_profile(black_box(&net), Direction::Out, CoreMode::Strength))
    });
}

fn significance(c: &mut Criterion) {
    let corpus = null_corpus(600, 1800, 3);
    let plan = ShufflePlan::new(7, 100).unwrap();
    let mut group = c.benchmark_group("significance");
    group.sample_size(10);
    group.bench_function("pair_zscores_100", |b| {
        b.iter(|| pair_zscores(black_box(&corpus), &plan).unwrap())
    });
    let table = pair_zscores(&corpus, &plan).unwrap();
    group.bench_function("segment_all", |b| {
        b.iter(|| mean_tree_height(black_box(&corpus), &table).unwrap())
    });
    group.finish();
}

criterion_group!(benches, network, cores, significance);
criterion_main!(benches);
