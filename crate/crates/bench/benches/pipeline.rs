use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mfdfa_bench::{fgn_increments, fgn_profile};
use mfdfa_core::mfdfa::q_grid;
use mfdfa_core::{analyze, fluctuation_surface, iaaft, quadratic_tau_fit, AnalysisConfig, DetrendOrder, IaaftConfig};

fn surface(c: &mut Criterion) {
    let mut g = c.benchmark_group("fluctuation_surface");
    for n in [1 << 12, 1 << 14] {
        let profile = fgn_profile(n);
        for order in [DetrendOrder::Linear, DetrendOrder::Quadratic] {
            let cfg = AnalysisConfig::with_defaults(order);
            g.bench_with_input(BenchmarkId::new(format!("l{order}"), n), &profile, |b, p| {
                b.iter(|| fluctuation_surface(black_box(p), &cfg).unwrap())
            });
        }
    }
    g.finish();
}

fn spectrum(c: &mut Criterion) {
    let profile = fgn_profile(1 << 14);
    let cfg = AnalysisConfig::with_defaults(DetrendOrder::Linear);
    c.bench_function("analyze/16384", |b| b.iter(|| analyze(black_box(&profile), &cfg).unwrap()));
}

fn surrogate(c: &mut Criterion) {
    let mut g = c.benchmark_group("iaaft");
    g.sample_size(10);
    for n in [1 << 12, 1 << 14] {
        let x = fgn_increments(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &x, |b, x| {
            b.iter(|| iaaft(black_box(x), &IaaftConfig::default()).unwrap())
        });
    }
    g.finish();
}

fn quad_fit(c: &mut Criterion) {
    let q = q_grid(-5.0, 5.0, 0.25).unwrap();
    let tau: Vec<f64> = q.iter().map(|x| -1.0 + 0.6 * x - 0.01 * x * x + 1e-3 * x.sin()).collect();
    c.bench_function("quadratic_tau_fit/41", |b| b.iter(|| quadratic_tau_fit(black_box(&q), black_box(&tau)).unwrap()));
}

criterion_group!(benches, surface, spectrum, surrogate, quad_fit);
criterion_main!(benches);
