//! Acceptance suite: one test per criterion, each printing a single
//! `criterion N: PASS|FAIL` line with the measured figures.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use pvi_core::asymptotic::eval_leading;
use pvi_core::connection::{
    compatibility_xy, connect_at_one, forward, forward_detailed, generic_amplitude, inverse,
    inverse_detailed, CaseKind, CriticalData, CriticalPoint,
};
use pvi_core::elliptic::{
    eval_theorem3, script_domain_contains, solve_v, theorem3_residual, DomainSpecScriptD,
    EllipticData, SolveOptions,
};
use pvi_core::fuchsian::{
    build_from_trace, default_loops, numeric_monodromy, pair_traces, traces_to_triple,
};
use pvi_core::integrator::{fit_critical_data, integrate, FitOptions, OdeState, PathPlan};
use pvi_core::monodromy::{braid_beta1_sq, relation_residual};
use pvi_core::special::{gamma, half_periods, wp};
use pvi_core::{CoveringPoint, MonodromyTriple, Mu};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn report(n: u32, ok: bool, detail: String) {
    println!(
        "criterion {n}: {} | {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {n} failed: {detail}");
}

/// Generic sample: `0.1 <= Re σ <= 0.9` (away from the `x₀ → ±2` boundary),
/// `σ ∉ ℝ` half the time, `a ≠ 0`, complex `μ`.
fn generic_sample(rng: &mut ChaCha8Rng) -> (Complex64, Complex64, Mu) {
    let sigma = c(
        rng.gen_range(0.1..=0.9),
        if rng.gen_bool(0.5) {
            rng.gen_range(-0.6..0.6)
        } else {
            0.0
        },
    );
    let a = Complex64::from_polar(rng.gen_range(0.2..3.0), rng.gen_range(-PI..PI));
    let mu = Mu::new(c(rng.gen_range(-1.4..1.4), rng.gen_range(-0.3..0.3))).unwrap();
    (sigma, a, mu)
}

#[test]
fn criterion_01_connection_round_trip() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut worst_rt, mut worst_rel) = (0.0f64, 0.0f64);
    let mut failures = 0;
    for _ in 0..200 {
        let (sigma, a, mu) = generic_sample(&mut rng);
        match forward(sigma, a, &mu).and_then(|t| Ok((t, inverse(&t, &mu)?))) {
            Ok((t, back)) => {
                worst_rt = worst_rt.max(back.rel_distance(&CriticalData::at_zero(sigma, a)));
                worst_rel = worst_rel.max(relation_residual(&t, &mu));
            }
            Err(_) => failures += 1,
        }
    }
    let elapsed = start.elapsed();
    report(
        1,
        failures == 0 && worst_rt <= 1e-9 && worst_rel <= 1e-10 && elapsed < Duration::from_secs(5),
        format!("errors {failures}, max round-trip rel {worst_rt:.2e}, max relation residual {worst_rel:.2e}, {elapsed:?}"),
    );
}

#[test]
fn criterion_02_compatibility_xy() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    let mut count = 0;
    while count < 100 {
        let (sigma, a, mu) = generic_sample(&mut rng);
        let con = forward_detailed(sigma, a, &mu).unwrap();
        if con.case.tag != CaseKind::GenericI {
            continue;
        }
        let (x, y) = compatibility_xy(&con.triple, sigma, &mu).unwrap();
        worst = worst.max((x * y - 1.0).norm());
        count += 1;
    }
    report(
        2,
        worst <= 1e-10,
        format!("max |XY - 1| = {worst:.2e} over {count} case-I instances"),
    );
}

#[test]
fn criterion_03_reflection_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let (sigma, a, mu) = generic_sample(&mut rng);
        let t = forward(sigma, a, &mu).unwrap();
        let ap = generic_amplitude(&t, sigma, &mu).unwrap();
        let am = generic_amplitude(&t, -sigma, &mu).unwrap();
        worst = worst.max((16.0 * ap * am - 1.0).norm());
    }
    report(
        3,
        worst <= 1e-10,
        format!("max |16 a(s) a(-s) - 1| = {worst:.2e} over 50 instances"),
    );
}

#[test]
fn criterion_04_braid_coherence() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let (sigma, a, mu) = generic_sample(&mut rng);
        let t = forward(sigma, a, &mu).unwrap();
        let back = inverse(&braid_beta1_sq(&t), &mu).unwrap();
        let expect = CriticalData::at_zero(sigma, a * (-2.0 * PI * Complex64::i() * sigma).exp());
        worst = worst.max(back.rel_distance(&expect));
    }
    report(
        4,
        worst <= 1e-9,
        format!("max rel distance {worst:.2e} over 50 instances"),
    );
}

fn rational(a: f64, x: Complex64) -> (Complex64, Complex64) {
    let d = 1.0 - (1.0 - a) * x;
    (a * x / d, a / (d * d))
}

#[test]
fn criterion_05_exact_oracle_ode() {
    let start = Instant::now();
    let mu1 = Mu::real(1.0).unwrap();
    let x0 = CoveringPoint::real(0.1);
    let (y, dy) = rational(0.5, x0.to_complex());
    let tr = integrate(
        OdeState { x: x0, y, dy },
        &PathPlan::log_segments(x0, CoveringPoint::real(0.9), 40),
        &mu1,
    )
    .unwrap();
    let err_rat = tr
        .states
        .iter()
        .map(|s| (s.y - rational(0.5, s.x.to_complex()).0).norm())
        .fold(0.0, f64::max);
    let mu = Mu::real(0.5).unwrap();
    let x0 = CoveringPoint::real(0.05);
    let s0 = OdeState {
        x: x0,
        y: c(0.05f64.sqrt(), 0.0),
        dy: c(0.5 / 0.05f64.sqrt(), 0.0),
    };
    let tr2 = integrate(
        s0,
        &PathPlan::log_segments(x0, CoveringPoint::real(0.5), 40),
        &mu,
    )
    .unwrap();
    let err_pic = tr2
        .states
        .iter()
        .map(|s| (s.y - s.x.to_complex().sqrt()).norm())
        .fold(0.0, f64::max);
    let elapsed = start.elapsed();
    report(
        5,
        tr.completed
            && tr2.completed
            && err_rat <= 1e-8
            && err_pic <= 1e-6
            && elapsed < Duration::from_secs(10),
        format!("rational max err {err_rat:.2e}, Picard max err {err_pic:.2e}, {elapsed:?}"),
    );
}

#[test]
fn criterion_06_end_to_end_connection() {
    let start = Instant::now();
    let s2 = 2f64.sqrt();
    let mu = Mu::real(0.5).unwrap();
    let triple = MonodromyTriple::real(s2, 0.0, s2);
    let zero = inverse(&triple, &mu).unwrap();
    let one = connect_at_one(&triple, &mu).unwrap();
    let pred_ok = (zero.sigma - 0.5).norm() < 1e-12
        && (zero.a - 1.0).norm() < 1e-12
        && one.sigma.norm() < 1e-12
        && (one.a - 0.5).norm() < 1e-12;
    let x0 = CoveringPoint::real(1e-3);
    let (y, dy) = eval_leading(x0, &zero).unwrap();
    let tr = integrate(
        OdeState { x: x0, y, dy },
        &PathPlan::log_segments(x0, CoveringPoint::real(0.99), 200),
        &mu,
    )
    .unwrap();
    let opts = FitOptions {
        corrections: vec![c(1.0, 0.0)],
        ..FitOptions::default()
    };
    let fit = fit_critical_data(&tr.states, CriticalPoint::One, (0.01, 0.1), &opts).unwrap();
    // Cross-check: the prediction (1/2, 1) at zero is the exact solution √x.
    let closed = tr
        .states
        .iter()
        .filter(|s| s.x.modulus >= 0.01)
        .map(|s| (s.y - s.x.to_complex().sqrt()).norm())
        .fold(0.0, f64::max);
    let ds = fit.sigma_hat.norm();
    let da = (fit.a_hat - one.a).norm();
    let elapsed = start.elapsed();
    report(
        6,
        pred_ok && tr.completed && ds <= 1e-2 && da <= 1e-2 && elapsed < Duration::from_secs(30),
        format!(
            "predicted (s0, a0) = ({:.3}, {:.3}), (s1, a1) = ({:.3}, {:.3}); fitted s1 = {:.3e}, a1 = {:.5}; |s1| {ds:.2e}, |a1 - 1/2| {da:.2e}; max |y - sqrt x| {closed:.2e}; {elapsed:?}",
            zero.sigma, zero.a, one.sigma, one.a, fit.sigma_hat, fit.a_hat
        ),
    );
}

#[test]
fn criterion_07_quantum_cohomology_datum() {
    let mu = Mu::real(-1.0).unwrap();
    let con = inverse_detailed(&MonodromyTriple::real(3.0, 3.0, 3.0), &mu).unwrap();
    let s = con.data.sigma;
    let a = con.data.a;
    let ok = (s.re - 1.0).abs() <= 1e-9
        && (s.im.abs() - 0.61267).abs() <= 1e-4
        && a.is_finite()
        && a.norm() > 0.0;
    report(7, ok, format!("sigma = {s:.10}, a = {a:.6}"));
}

#[test]
fn criterion_08_elliptic_engine() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let half = Mu::real(0.5).unwrap();
    let mut worst_zero = 0.0f64;
    for _ in 0..10 {
        let ed = EllipticData::new(
            c(rng.gen_range(0.0..1.9), rng.gen_range(-0.3..0.3)),
            c(rng.gen_range(0.1..1.9), rng.gen_range(-0.3..0.3)),
        )
        .unwrap();
        let arg = rng.gen_range(-1.0..1.0);
        let x = (4..40)
            .map(|k| CoveringPoint::new(10f64.powi(-k), arg))
            .find(|&x| script_domain_contains(x, &DomainSpecScriptD { r: 0.05, ed }))
            .unwrap();
        worst_zero = worst_zero.max(solve_v(x, &ed, &half, 1e-12).unwrap().v.norm());
    }
    let mu = Mu::real(1.0).unwrap();
    let ed = EllipticData::new(c(1.0, 0.0), c(0.5, 0.0)).unwrap();
    const M_BOUND: f64 = 10.0;
    let (mut worst_ratio, mut worst_q, mut worst_res) = (0.0f64, 0.0f64, 0.0f64);
    let mut failures = 0;
    for &m in &[1e-6, 1e-5, 1e-4, 1e-3, 1e-2] {
        for &arg in &[-1.5, -0.5, 0.5, 1.5] {
            let x = CoveringPoint::new(m, arg);
            match (
                solve_v(x, &ed, &mu, 1e-12),
                theorem3_residual(x, &ed, &mu, &SolveOptions::default()),
            ) {
                (Ok(s), Ok(r)) => {
                    worst_ratio = worst_ratio.max(s.bound_ratio);
                    worst_q = worst_q.max(s.contraction);
                    worst_res = worst_res.max(r);
                }
                _ => failures += 1,
            }
        }
    }
    let value = eval_theorem3(CoveringPoint::real(1e-3), &ed, &mu)
        .unwrap()
        .y;
    let elapsed = start.elapsed();
    report(
        8,
        worst_zero <= 1e-12
            && failures == 0
            && worst_q < 1.0
            && worst_ratio <= M_BOUND
            && worst_res <= 1e-6
            && value.is_finite()
            && elapsed < Duration::from_secs(60),
        format!(
            "mu=1/2 max |v| {worst_zero:.1e}; mu=1 on 20 points: failures {failures}, max contraction {worst_q:.3e}, max |v|/scale {worst_ratio:.3} (M = {M_BOUND}), max residual {worst_res:.2e}; {elapsed:?}"
        ),
    );
}

#[test]
fn criterion_09_fuchsian_referee() {
    let start = Instant::now();
    let mu = Mu::real(0.5).unwrap();
    let (sigma, a) = (c(0.5, 0.0), c(1.0, 0.0));
    let pred = forward(sigma, a, &mu).unwrap();
    let x0 = CoveringPoint::real(1e-30);
    let (y, dy) = eval_leading(x0, &CriticalData::at_zero(sigma, a)).unwrap();
    let mut traces = Vec::new();
    let mut triple = None;
    for xe in [0.2, 0.3, 0.35] {
        let tr = integrate(
            OdeState { x: x0, y, dy },
            &PathPlan::log_segments(x0, CoveringPoint::real(xe), 1),
            &mu,
        )
        .unwrap();
        let fs = build_from_trace(&tr, &mu, c(1.0, 0.0)).unwrap();
        let ms = numeric_monodromy(&fs, &default_loops(c(xe, 0.0))).unwrap();
        traces.push(pair_traces(&ms));
        if xe == 0.3 {
            triple = Some(traces_to_triple(&ms).unwrap());
        }
    }
    let t = triple.unwrap();
    let at3 = traces[1];
    let dev = at3
        .iter()
        .zip([0.0, 2.0, 0.0])
        .map(|(t, e)| (t - e).norm())
        .fold(0.0, f64::max);
    let drift = traces[0]
        .iter()
        .zip(traces[2].iter())
        .map(|(p, q)| (p - q).norm())
        .fold(0.0, f64::max);
    let class = t.class_distance(&pred);
    let elapsed = start.elapsed();
    report(
        9,
        dev <= 1e-4 && class <= 1e-4 && drift <= 1e-3 && elapsed < Duration::from_secs(30),
        format!("pair-trace deviation {dev:.2e}, triple class distance {class:.2e}, x=0.2 vs 0.35 drift {drift:.2e}, {elapsed:?}"),
    );
}

/// Jacobi `sn(u | m)` from theta functions with nome `q = e^{−πK′/K}`,
/// `K` by the arithmetic-geometric mean.
fn sn_theta(u: Complex64, m: f64) -> Complex64 {
    let agm = |mut a: f64, mut b: f64| {
        while (a - b).abs() > 1e-16 * a {
            let (a1, b1) = (0.5 * (a + b), (a * b).sqrt());
            a = a1;
            b = b1;
        }
        a
    };
    let k = PI / (2.0 * agm(1.0, (1.0 - m).sqrt()));
    let kp = PI / (2.0 * agm(1.0, m.sqrt()));
    let q = (-PI * kp / k).exp();
    let z = PI * u / (2.0 * k);
    let (mut th1, mut th2, mut th3, mut th4) = (c(0.0, 0.0), 0.0, 1.0, c(1.0, 0.0));
    for n in 0..40 {
        let nf = n as f64;
        let sgn = if n % 2 == 0 { 1.0 } else { -1.0 };
        let qh = q.powf((nf + 0.5) * (nf + 0.5));
        th1 += 2.0 * sgn * qh * ((2.0 * nf + 1.0) * z).sin();
        th2 += 2.0 * qh;
        if n >= 1 {
            let qn = q.powf(nf * nf);
            th3 += 2.0 * qn;
            th4 += 2.0 * sgn * qn * (2.0 * nf * z).cos();
        }
    }
    th3 / th2 * th1 / th4
}

#[test]
fn criterion_10_special_function_floor() {
    let zs = [
        c(0.3, 0.2),
        c(2.7, -1.1),
        c(-1.4, 0.6),
        c(5.5, 3.0),
        c(0.01, -0.02),
        c(-3.3, -0.4),
        c(12.0, 7.0),
    ];
    let mut gam = 0.0f64;
    for z in zs {
        let g = gamma(z).unwrap();
        gam = gam.max((gamma(z + 1.0).unwrap() - z * g).norm() / (z * g).norm());
        let refl = g * gamma(1.0 - z).unwrap() * (PI * z).sin() / PI;
        gam = gam.max((refl - 1.0).norm());
    }
    // x(1−x)ω″ + (1−2x)ω′ − ω/4 = 0 for ω₁ and ω₂ by central differences.
    let mut ode = 0.0f64;
    let h = 1e-3;
    for x in [c(0.1, 0.05), c(0.3, -0.2), c(-0.2, 0.1), c(0.45, 0.3)] {
        let om = |z: Complex64| {
            let hp = half_periods(CoveringPoint::from_principal(z).unwrap()).unwrap();
            [hp.omega1, hp.omega2]
        };
        let (p, m, o) = (om(x + h), om(x - h), om(x));
        let (p2, m2) = (om(x + 2.0 * h), om(x - 2.0 * h));
        for i in 0..2 {
            let d1 = (8.0 * (p[i] - m[i]) - (p2[i] - m2[i])) / (12.0 * h);
            let d2 = (16.0 * (p[i] + m[i]) - (p2[i] + m2[i]) - 30.0 * o[i]) / (12.0 * h * h);
            let r = x * (1.0 - x) * d2 + (1.0 - 2.0 * x) * d1 - 0.25 * o[i];
            ode = ode.max(r.norm() / o[i].norm());
        }
    }
    // wp(2ω₁) = e₁, wp(2ω₂) = e₃, wp(2ω₁ + 2ω₂) = e₂ with e₁ − e₃ = 1 and e₂ − e₃ = x.
    let mut half_id = 0.0f64;
    let mut sn_err = 0.0f64;
    for &x in &[0.05, 0.2, 0.45] {
        let hp = half_periods(CoveringPoint::real(x)).unwrap();
        let (e1, e2, e3) = ((2.0 - x) / 3.0, (2.0 * x - 1.0) / 3.0, -(1.0 + x) / 3.0);
        half_id = half_id.max((wp(2.0 * hp.omega1, &hp).unwrap() - e1).norm());
        half_id = half_id.max((wp(2.0 * hp.omega2, &hp).unwrap() - e3).norm());
        half_id = half_id.max((wp(2.0 * (hp.omega1 + hp.omega2), &hp).unwrap() - e2).norm());
        for u in [c(0.3, 0.0), c(1.1, 0.4), c(0.7, -0.9), c(2.5, 0.2)] {
            let lhs = wp(u, &hp).unwrap() + (1.0 + x) / 3.0;
            let s = sn_theta(0.5 * u, x);
            let rhs = 1.0 / (s * s);
            sn_err = sn_err.max((lhs - rhs).norm() / rhs.norm());
        }
    }
    report(
        10,
        gam <= 1e-12 && ode <= 1e-6 && half_id <= 1e-12 && sn_err <= 1e-8,
        format!(
            "gamma {gam:.2e}, hypergeometric operator {ode:.2e}, half-period identities {half_id:.2e}, wp vs 1/sn^2 {sn_err:.2e}"
        ),
    );
}
