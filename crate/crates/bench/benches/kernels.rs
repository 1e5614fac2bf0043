//! Timings of the special functions, connection maps, continuation,
//! elliptic fixed point and numerical monodromy.

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use num_complex::Complex64;
use pvi_core::connection::{forward, inverse};
use pvi_core::elliptic::{solve_v, EllipticData};
use pvi_core::fuchsian::{build_system, default_loops, numeric_monodromy};
use pvi_core::integrator::{integrate, OdeState, PathPlan};
use pvi_core::special::{gamma, half_periods, hyp_f, wp};
use pvi_core::{CoveringPoint, Mu};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn special(cr: &mut Criterion) {
    cr.bench_function("gamma", |b| b.iter(|| gamma(black_box(c(2.3, -4.1)))));
    cr.bench_function("hyp_f", |b| b.iter(|| hyp_f(black_box(c(0.3, 0.2)))));
    let hp = half_periods(CoveringPoint::new(0.1, 0.5)).unwrap();
    cr.bench_function("wp", |b| b.iter(|| wp(black_box(c(0.4, 0.3)), &hp)));
}

fn connection(cr: &mut Criterion) {
    let mu = Mu::new(c(0.35, 0.1)).unwrap();
    let (sigma, a) = (c(0.45, 0.2), c(1.2, -0.3));
    let t = forward(sigma, a, &mu).unwrap();
    cr.bench_function("forward", |b| {
        b.iter(|| forward(black_box(sigma), black_box(a), &mu))
    });
    cr.bench_function("inverse", |b| b.iter(|| inverse(black_box(&t), &mu)));
}

fn continuation(cr: &mut Criterion) {
    let mu = Mu::real(0.5).unwrap();
    let x0 = CoveringPoint::real(1e-3);
    let seed = OdeState {
        x: x0,
        y: c(x0.modulus.sqrt(), 0.0),
        dy: c(0.5 / x0.modulus.sqrt(), 0.0),
    };
    let plan = PathPlan::log_segments(x0, CoveringPoint::new(0.5, 1.0), 4);
    cr.bench_function("integrate", |b| {
        b.iter(|| integrate(black_box(seed), &plan, &mu))
    });
}

fn elliptic(cr: &mut Criterion) {
    let mu = Mu::real(1.0).unwrap();
    let ed = EllipticData::new(c(1.0, 0.0), c(0.5, 0.0)).unwrap();
    let x = CoveringPoint::real(0.01);
    cr.bench_function("solve_v", |b| {
        b.iter(|| solve_v(black_box(x), &ed, &mu, 1e-12))
    });
}

fn monodromy(cr: &mut Criterion) {
    let mu = Mu::real(0.3).unwrap();
    let x = CoveringPoint::real(0.3);
    let fs = build_system(x, c(0.45, 0.05), c(0.7, 0.2), &mu, c(1.0, 0.0)).unwrap();
    let loops = default_loops(x.to_complex());
    cr.bench_function("numeric_monodromy", |b| {
        b.iter(|| numeric_monodromy(black_box(&fs), &loops))
    });
}

criterion_group!(
    kernels,
    special,
    connection,
    continuation,
    elliptic,
    monodromy
);
criterion_main!(kernels);
