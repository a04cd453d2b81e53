//! Rank benchmarks on realistic multiplication matrices, comparing the
//! default elimination (data-parallel when the `parallel` feature is on)
//! against the always-sequential path.
//!
//! Run with `cargo bench`, or `cargo bench --no-default-features` to confirm
//! the two paths coincide without rayon.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use froberg::gfp::{PrimeFieldMatrix, DEFAULT_PRIME};
use froberg::verifier::{multiplication_matrix, sample_form, FormClass};

/// A degree-(d+k) multiplication matrix for z sampled dense forms.
fn matrix(n: usize, d: usize, k: usize, z: usize) -> PrimeFieldMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let forms: Vec<_> = (0..z)
        .map(|_| {
            sample_form(FormClass::DenseGeneric, n, d, DEFAULT_PRIME, &mut rng)
                .expect("bench instance under caps")
        })
        .collect();
    multiplication_matrix(&forms, k).expect("bench instance under caps")
}

fn bench_rank(c: &mut Criterion) {
    // z is chosen near dim S_{d+k} / dim S_k, so the matrices are roughly
    // square and elimination runs to full depth — the worst case.
    for (n, d, k, z, sample_size) in [(5, 4, 2, 14, 30), (5, 6, 3, 20, 10)] {
        let m = matrix(n, d, k, z);
        let mut group = c.benchmark_group(format!("rank/{}x{}", m.rows(), m.cols()));
        group.sample_size(sample_size);
        group.bench_function("default", |b| b.iter(|| black_box(&m).rank()));
        group.bench_function("sequential", |b| b.iter(|| black_box(&m).rank_sequential()));
        group.finish();
    }
}

criterion_group!(benches, bench_rank);
criterion_main!(benches);
