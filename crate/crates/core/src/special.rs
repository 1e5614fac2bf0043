//! Complex special functions: Gamma, digamma, the hypergeometric pair
//! `F = F(1/2,1/2,1;x)` and its logarithmic partner `F₁`, the half-periods
//! `ω₁, ω₂`, and the Weierstrass function through its Fourier series.
//!
//! Normalization of `℘`: [`wp`] returns `℘(u/2; ω₁, ω₂)` and [`wp_du`] its
//! derivative with respect to `u`. Thus `wp(2ω₁) = e₁`, `wp(2ω₂) = e₃` and
//! the real period in `u` is `4ω₁`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};

pub use crate::covering::CoveringPoint;
use crate::error::{Error, Result};

/// Radius guard for the hypergeometric power series.
pub const SERIES_RADIUS: f64 = 0.6;
/// Relative cut-off for power-series tails.
pub const SERIES_TOL: f64 = 1e-16;
/// Stopping threshold for the Fourier terms of `℘`.
pub const WP_TOL: f64 = 1e-15;
/// Largest number of Fourier terms before `℘` reports non-convergence.
pub const WP_MAX_TERMS: usize = 500;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

// B_{2k}/(2k(2k-1)), k = 1..10, for the Stirling series of ln Γ.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1_260.0,
    -1.0 / 1_680.0,
    1.0 / 1_188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3_617.0 / 122_400.0,
    43_867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

// Shift target for the recurrence before the asymptotic series is used.
const STIRLING_MIN: f64 = 15.0;

fn pole_check(z: Complex64) -> Result<()> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::GammaPole(z.re));
    }
    Ok(())
}

/// `sin(πz)` with the real part reduced modulo 2 first, so the result keeps
/// full relative accuracy near the integers.
fn sin_pi(z: Complex64) -> Complex64 {
    let shift = 2.0 * (z.re / 2.0).round();
    (PI * (z - shift)).sin()
}

fn cos_pi(z: Complex64) -> Complex64 {
    let shift = 2.0 * (z.re / 2.0).round();
    (PI * (z - shift)).cos()
}

/// Complex Gamma function.
///
/// Reflection for `Re z < 1/2`; otherwise upward recurrence to `|z| >= 15`
/// followed by the Stirling series. Relative error below `1e-13` on `|z| <= 50`.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    pole_check(z)?;
    if z.re < 0.5 {
        return Ok(PI / (sin_pi(z) * gamma_right(ONE - z)));
    }
    Ok(gamma_right(z))
}

fn gamma_right(z: Complex64) -> Complex64 {
    let mut w = z;
    let mut prod = ONE;
    while w.norm() < STIRLING_MIN {
        prod *= w;
        w += 1.0;
    }
    let inv = ONE / w;
    let inv2 = inv * inv;
    let mut pow = inv;
    let mut series = Complex64::new(0.0, 0.0);
    for c in STIRLING {
        series += c * pow;
        pow *= inv2;
    }
    let ln_gamma = (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + series;
    ln_gamma.exp() / prod
}

// B_{2k}/(2k), k = 1..8.
const DIGAMMA_ASYMP: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32_760.0,
    1.0 / 12.0,
    -3_617.0 / 8_160.0,
];

/// Digamma function `ψ(z) = Γ'(z)/Γ(z)`.
///
/// Reflection for `Re z < 1/2`, upward recurrence to `|z| >= 12`, then the
/// asymptotic expansion.
pub fn digamma(z: Complex64) -> Result<Complex64> {
    pole_check(z)?;
    if z.re < 0.5 {
        let s = sin_pi(z);
        let c = cos_pi(z);
        return Ok(digamma(ONE - z)? - PI * c / s);
    }
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.norm() < 12.0 {
        shift -= ONE / w;
        w += 1.0;
    }
    let inv2 = ONE / (w * w);
    let mut pow = inv2;
    let mut series = Complex64::new(0.0, 0.0);
    for c in DIGAMMA_ASYMP {
        series += c * pow;
        pow *= inv2;
    }
    Ok(shift + w.ln() - 0.5 / w - series)
}

fn radius_guard(x: Complex64) -> Result<()> {
    let m = x.norm();
    if !(m <= SERIES_RADIUS) {
        return Err(Error::OutOfRadius {
            modulus: m,
            radius: SERIES_RADIUS,
        });
    }
    Ok(())
}

/// `F(x) = F(1/2, 1/2, 1; x) = Σ ((1/2)_n / n!)² xⁿ` for `|x| <= 0.6`.
pub fn hyp_f(x: Complex64) -> Result<Complex64> {
    radius_guard(x)?;
    Ok(hyp_pair(x).0)
}

/// `F₁(x) = Σ ((1/2)_n / n!)² 2[ψ(n+1/2) − ψ(n+1)] xⁿ` for `|x| <= 0.6`.
pub fn hyp_f1(x: Complex64) -> Result<Complex64> {
    radius_guard(x)?;
    Ok(hyp_pair(x).1)
}

/// Sums `F` and `F₁` together; both share the coefficient `((1/2)_n/n!)²`.
fn hyp_pair(x: Complex64) -> (Complex64, Complex64) {
    let ax = x.norm();
    let mut c = 1.0_f64;
    // d_n = ψ(n+1/2) − ψ(n+1), d_0 = −2 ln 2
    let mut d = -2.0 * LN_2;
    let mut xn = ONE;
    let mut f = Complex64::new(0.0, 0.0);
    let mut f1 = Complex64::new(0.0, 0.0);
    let mut n = 0usize;
    loop {
        f += c * xn;
        f1 += 2.0 * c * d * xn;
        let nf = n as f64;
        let ratio = (nf + 0.5) / (nf + 1.0);
        c *= ratio * ratio;
        d += 1.0 / (nf + 0.5) - 1.0 / (nf + 1.0);
        xn *= x;
        n += 1;
        // Coefficients are decreasing, so the tail is bounded by a geometric sum.
        let bound = c * (1.0 + 2.0 * d.abs()) * xn.norm() / (1.0 - ax);
        if bound < SERIES_TOL * f.norm().max(1e-300) || xn.norm() == 0.0 {
            break;
        }
    }
    (f, f1)
}

/// Half-periods `ω₁ = (π/2)F(x)`, `ω₂ = −(i/2)[F(x) ln x + F₁(x)]` and `τ = ω₂/ω₁`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPeriods {
    pub omega1: Complex64,
    pub omega2: Complex64,
    pub tau: Complex64,
}

/// Evaluates the half-periods at a covering point; `ln x` uses the stored argument.
pub fn half_periods(x: CoveringPoint) -> Result<HalfPeriods> {
    let xc = x.to_complex();
    radius_guard(xc)?;
    let (f, f1) = hyp_pair(xc);
    let omega1 = 0.5 * PI * f;
    let omega2 = -0.5 * I * (f * x.ln() + f1);
    Ok(HalfPeriods {
        omega1,
        omega2,
        tau: omega2 / omega1,
    })
}

/// `g(x) = F₁/F + 4 ln 2`, the analytic part of `τ` beyond its logarithm.
pub fn g_function(x: Complex64) -> Result<Complex64> {
    radius_guard(x)?;
    let (f, f1) = hyp_pair(x);
    Ok(f1 / f + 4.0 * LN_2)
}

/// `1/sin²(πw)` and `cos(πw)/sin³(πw)` written through `E = e^{±2πiw}`
/// with `|E| <= 1`, so neither overflows for large `|Im w|`.
fn csc_pieces(w: Complex64) -> (Complex64, Complex64) {
    if w.im >= 0.0 {
        let e = (2.0 * PI * I * w).exp();
        let d = e - 1.0;
        (-4.0 * e / (d * d), -4.0 * I * e * (e + 1.0) / (d * d * d))
    } else {
        let e = (-2.0 * PI * I * w).exp();
        let d = e - 1.0;
        (-4.0 * e / (d * d), 4.0 * I * e * (e + 1.0) / (d * d * d))
    }
}

fn wp_check(u: Complex64, hp: &HalfPeriods) -> Result<Complex64> {
    let w = u / (4.0 * hp.omega1);
    if !(hp.tau.im > 0.0) {
        return Err(Error::Precondition(format!(
            "Im tau = {} must be positive",
            hp.tau.im
        )));
    }
    if !(w.im.abs() < hp.tau.im) {
        return Err(Error::Precondition(format!(
            "|Im u/(4 omega1)| = {} must be below Im tau = {}",
            w.im.abs(),
            hp.tau.im
        )));
    }
    Ok(w)
}

/// Sums `Σ n^p/(1−Q^n) · [c₀ Qⁿ + c₊ e^{2πin(τ+w)} + c₋ e^{2πin(τ−w)}]`.
fn fourier_sum(
    w: Complex64,
    tau: Complex64,
    power: i32,
    coeffs: (Complex64, Complex64, Complex64),
) -> Result<Complex64> {
    let step_q = (2.0 * PI * I * tau).exp();
    let step_p = (2.0 * PI * I * (tau + w)).exp();
    let step_m = (2.0 * PI * I * (tau - w)).exp();
    let rate = (-2.0 * PI * (tau.im - w.im.abs())).exp();
    let mut qn = ONE;
    let mut pn = ONE;
    let mut mn = ONE;
    let mut sum = Complex64::new(0.0, 0.0);
    for n in 1..=WP_MAX_TERMS {
        qn *= step_q;
        pn *= step_p;
        mn *= step_m;
        let nf = (n as f64).powi(power);
        let term = nf / (ONE - qn) * (coeffs.0 * qn + coeffs.1 * pn + coeffs.2 * mn);
        sum += term;
        let bound = nf * (qn.norm() + pn.norm() + mn.norm()) / (1.0 - qn.norm());
        if bound < WP_TOL * (1.0 - rate) * sum.norm().max(1.0) {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence(format!(
        "Weierstrass Fourier series needed more than {WP_MAX_TERMS} terms"
    )))
}

/// `℘(u/2; ω₁, ω₂)` from its Fourier expansion in `q² = e^{2πiτ}`.
///
/// Requires `Im τ > 0` and `|Im(u/(4ω₁))| < Im τ`.
pub fn wp(u: Complex64, hp: &HalfPeriods) -> Result<Complex64> {
    let w = wp_check(u, hp)?;
    let s = fourier_sum(
        w,
        hp.tau,
        1,
        (ONE, Complex64::new(-0.5, 0.0), Complex64::new(-0.5, 0.0)),
    )?;
    let (csc2, _) = csc_pieces(w);
    let o2 = hp.omega1 * hp.omega1;
    Ok(-PI * PI / (12.0 * o2) + 2.0 * PI * PI / o2 * s + PI * PI / (4.0 * o2) * csc2)
}

/// `d/du ℘(u/2; ω₁, ω₂)`, the term-by-term derivative of [`wp`].
pub fn wp_du(u: Complex64, hp: &HalfPeriods) -> Result<Complex64> {
    let w = wp_check(u, hp)?;
    let half = Complex64::new(0.0, -0.5);
    let s = fourier_sum(w, hp.tau, 2, (Complex64::new(0.0, 0.0), half, -half))?;
    let (_, cot_csc2) = csc_pieces(w);
    let p = PI / hp.omega1;
    let p2 = 0.5 * p;
    Ok(p * p * p * s - p2 * p2 * p2 * cot_csc2)
}
