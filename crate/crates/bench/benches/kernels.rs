use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use hosc_core::norms::{oscillator_xt_norm, Discretization, TimeRoute};
use hosc_core::propagators::{mehler_spectral_sum, FreePropagator};
use hosc_core::verify::{FamilyKind, TrialFamily};
use hosc_core::{gauss_hermite, Basis, QuadratureGrid, Sampler, WeightConvention};

fn random_field(n: usize, cutoff: usize) -> hosc_core::SpectralField {
    TrialFamily { kind: FamilyKind::RandomBandLimited, dimension: n, cutoff, seed: 1, real: false }
        .draw(0)
        .unwrap()
}

fn quadrature(c: &mut Criterion) {
    c.bench_function("gauss_hermite/256", |b| b.iter(|| gauss_hermite(black_box(256)).unwrap()));
}

fn synthesis(c: &mut Criterion) {
    let grid = Arc::new(QuadratureGrid::gauss_hermite(2, 32, WeightConvention::Compensated).unwrap());
    let sampler = Sampler::new(Basis::shared(2, 20).unwrap(), grid).unwrap();
    let f = random_field(2, 20);
    c.bench_function("synthesize/n2_L20", |b| b.iter(|| sampler.synthesize(black_box(&f)).unwrap()));
    c.bench_function("analyze/n2_L20", |b| {
        let samples = sampler.synthesize(&f).unwrap();
        b.iter(|| sampler.analyze_samples(black_box(&samples)).unwrap())
    });
}

fn propagators(c: &mut Criterion) {
    let f = random_field(1, 20);
    let points: Vec<Vec<f64>> = (0..64).map(|i| vec![-6.0 + 12.0 * i as f64 / 63.0]).collect();
    let prop = FreePropagator::default();
    c.bench_function("free/n1_L20_t0.3", |b| b.iter(|| prop.apply(&f, black_box(0.3), &points).unwrap()));
    c.bench_function("free/n1_L20_t5", |b| b.iter(|| prop.apply(&f, black_box(5.0), &points).unwrap()));
    c.bench_function("mehler_spectral_sum/n1_L60", |b| {
        b.iter(|| mehler_spectral_sum(black_box(0.5), &[0.3], &[-1.2], 60).unwrap())
    });
}

fn mixed_norms(c: &mut Criterion) {
    let disc = Discretization::new(3, 8).unwrap();
    let sampler = disc.sampler(2.25).unwrap();
    let f = random_field(3, 8);
    c.bench_function("xt_norm/n3_L8_q2_exact", |b| {
        b.iter(|| oscillator_xt_norm(black_box(&f), 2.25, 2.0, &sampler, TimeRoute::Exact).unwrap())
    });
}

criterion_group!(benches, quadrature, synthesis, propagators, mixed_norms);
criterion_main!(benches);
