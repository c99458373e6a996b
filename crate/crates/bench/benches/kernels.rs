use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

use lparity_core::algebra::{determinant, permanent, IntMatrix};
use lparity_core::search::random_square;
use lparity_core::spectrum::{count_transversals, r_sequence, spectrum_enumerate, RMode};

fn random_zero_one(n: usize, seed: u64) -> IntMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|_| (0..n).map(|_| rng.random_range(0..=1)).collect())
        .collect();
    IntMatrix::from_i64_rows(&rows).unwrap()
}

fn bench_permanent(c: &mut Criterion) {
    let mut g = c.benchmark_group("permanent");
    g.sample_size(10);
    for n in [16usize, 20, 24] {
        let m = random_zero_one(n, 7);
        g.bench_function(format!("ryser_01_{n}"), |b| {
            b.iter(|| permanent(black_box(&m)).unwrap())
        });
    }
    let dense = IntMatrix::ones(20);
    g.bench_function("ryser_ones_20", |b| {
        b.iter(|| permanent(black_box(&dense)).unwrap())
    });
    g.finish();
}

fn bench_determinant(c: &mut Criterion) {
    let m = random_zero_one(24, 11);
    c.bench_function("determinant_01_24", |b| {
        b.iter(|| determinant(black_box(&m)).unwrap())
    });
}

fn bench_transversals(c: &mut Criterion) {
    let mut g = c.benchmark_group("count_transversals");
    g.sample_size(10);
    for n in [9usize, 10, 11, 12] {
        let l = random_square(n, 3);
        g.bench_function(format!("order_{n}"), |b| {
            b.iter(|| count_transversals(black_box(&l)))
        });
    }
    g.finish();
}

fn bench_spectrum(c: &mut Criterion) {
    let mut g = c.benchmark_group("spectrum");
    g.sample_size(10);
    let l8 = random_square(8, 5);
    g.bench_function("enumerate_order_8", |b| {
        b.iter(|| spectrum_enumerate(black_box(&l8)).unwrap())
    });
    g.bench_function("r_sequence_order_8", |b| {
        b.iter(|| r_sequence(black_box(&l8), RMode::Plain).unwrap())
    });
    g.finish();
}

fn bench_generation(c: &mut Criterion) {
    let mut g = c.benchmark_group("random_square");
    g.sample_size(10);
    for n in [8usize, 12] {
        let mut seed = 0u64;
        g.bench_function(format!("walk_order_{n}"), |b| {
            b.iter_batched(
                || {
                    seed += 1;
                    seed
                },
                |s| random_square(n, s),
                BatchSize::SmallInput,
            )
        });
    }
    g.finish();
}

criterion_group!(
    benches,
    bench_permanent,
    bench_determinant,
    bench_transversals,
    bench_spectrum,
    bench_generation
);
criterion_main!(benches);
