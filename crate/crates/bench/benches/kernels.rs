use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use focklab_core::transforms::weyl_matrix;
use focklab_core::{
    conjugated_multiplier_matrix, gauss_hermite, operator_norm, s_phi_matrix, symbol_from_multiplier, Basis,
    MultiplierSpec, SpectralVector, C64,
};

fn quadrature(c: &mut Criterion) {
    let mut g = c.benchmark_group("gauss_hermite");
    for order in [32usize, 80, 160] {
        g.bench_with_input(BenchmarkId::from_parameter(order), &order, |b, &q| {
            b.iter(|| gauss_hermite(black_box(q), 1.0, 1).unwrap())
        });
    }
    g.finish();
}

fn synthesis(c: &mut Criterion) {
    let v = SpectralVector::random_set(7, 1, 1, 64, 64, Basis::BargmannH)
        .unwrap()
        .remove(0);
    c.bench_function("synthesize N=64", |b| {
        b.iter(|| focklab_core::synthesize(&v, black_box(&[C64::new(0.4, -0.2)])).unwrap())
    });
}

fn matrices(c: &mut Criterion) {
    let mut g = c.benchmark_group("conjugated_multiplier_matrix");
    for n in [16u32, 32] {
        g.bench_with_input(BenchmarkId::new("bump", n), &n, |b, &n| {
            b.iter(|| conjugated_multiplier_matrix(&MultiplierSpec::bump(), 1, n).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("signum", n), &n, |b, &n| {
            b.iter(|| conjugated_multiplier_matrix(&MultiplierSpec::signum(), 1, n).unwrap())
        });
    }
    g.finish();
    c.bench_function("weyl_matrix N=32", |b| {
        b.iter(|| weyl_matrix(black_box(&[C64::new(0.5, 0.25)]), 32).unwrap())
    });
}

fn norms(c: &mut Criterion) {
    let mut g = c.benchmark_group("operator_norm");
    for n in [16u32, 64] {
        let m = conjugated_multiplier_matrix(&MultiplierSpec::signum(), 1, n).unwrap();
        g.bench_with_input(BenchmarkId::new("signum s=1", n), &m, |b, m| {
            b.iter(|| operator_norm(m, 1.0).unwrap())
        });
    }
    g.finish();
}

fn s_phi(c: &mut Criterion) {
    let mut g = c.benchmark_group("s_phi_matrix");
    g.sample_size(10);
    let grid = gauss_hermite(40, 1.0, 2).unwrap();
    let phi = symbol_from_multiplier(&MultiplierSpec::bump(), 1).unwrap();
    g.bench_function("bump N=8 Q=40", |b| b.iter(|| s_phi_matrix(&phi, 8, &grid).unwrap()));
    g.finish();
}

criterion_group!(benches, quadrature, synthesis, matrices, norms, s_phi);
criterion_main!(benches);
