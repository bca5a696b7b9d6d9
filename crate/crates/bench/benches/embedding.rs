// SPDX-License-Identifier: MIT OR Apache-2.0

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use seglens_bench::feature_matrix;
use seglens_core::embedding::{kpca_embed, pca_embed, Kernel};

fn embeddings(c: &mut Criterion) {
    let mut group = c.benchmark_group("embedding");
    group.sample_size(10);
    let tall = feature_matrix(3, 2_000, 64, 8);
    group.bench_function("pca_2000x64", |b| b.iter(|| pca_embed(black_box(&tall)).unwrap()));
    let small = feature_matrix(4, 400, 64, 4);
    group.bench_function("kpca_rbf_400x64", |b| {
        b.iter(|| kpca_embed(black_box(&small), &Kernel::Rbf { gamma: 0.01 }).unwrap())
    });
    group.finish();
}

criterion_group!(benches, embeddings);
criterion_main!(benches);
