//! Critical behaviour near `x = 0, 1, ∞`: the spiral domains, the path family
//! along which `|x^σ|` decays at a fixed rate, leading-order evaluation and
//! the coordinate changes that move `1` and `∞` to the origin.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::connection::{CriticalData, CriticalPoint};
use crate::covering::CoveringPoint;
use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
/// Relative slack on closed inequalities, absorbing rounding on boundaries.
const BOUNDARY_SLACK: f64 = 1e-12;

/// Domain `D(ε; σ; θ₁, θ₂, σ̃)` at one of the critical points.
///
/// For `point = Infinity`, `epsilon` holds the modulus threshold `M`
/// (membership requires `|x| > M`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainSpecD {
    pub epsilon: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub sigma_tilde: f64,
    pub sigma: Complex64,
    pub point: CriticalPoint,
}

impl DomainSpecD {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) || !(self.sigma_tilde > 0.0 && self.sigma_tilde < 1.0) {
            return Err(Error::InvalidInput(
                "domain needs epsilon > 0 and sigma_tilde in (0, 1)".into(),
            ));
        }
        Ok(())
    }
}

/// `t = 1 − x`, with the argument of `1 − x` taken on the principal sheet.
pub fn map_to_one(x: CoveringPoint) -> CoveringPoint {
    let t = ONE - x.to_complex();
    CoveringPoint::from_principal(t).expect("x = 1 has no image")
}

/// `t = 1/x`, transporting the argument as `arg t = −arg x`.
pub fn map_to_infinity(x: CoveringPoint) -> CoveringPoint {
    x.recip()
}

/// `y(x) = 1 − ŷ(t)` for `t = 1 − x`.
pub fn y_from_one(y_hat: Complex64) -> Complex64 {
    ONE - y_hat
}

/// `y(x) = ŷ(t)/t` for `t = 1/x`.
pub fn y_from_infinity(y_hat: Complex64, t: Complex64) -> Complex64 {
    y_hat / t
}

/// Local variable at the critical point of `d`, with the radius bound it must satisfy.
fn local_variable(x: CoveringPoint, point: CriticalPoint, eps: f64) -> (CoveringPoint, f64) {
    match point {
        CriticalPoint::Zero => (x, eps),
        CriticalPoint::One => (map_to_one(x), eps),
        CriticalPoint::Infinity => (map_to_infinity(x), 1.0 / eps),
    }
}

/// Membership in `D(ε; σ; θ₁, θ₂, σ̃)`:
/// `|x| < ε` and `e^{−θ₁ Im σ} |x|^{σ̃} <= |x^σ| <= e^{−θ₂ Im σ}`.
/// For real `σ` the domain is the punctured disc `|x| < ε` on every sheet.
pub fn domain_contains(x: CoveringPoint, d: &DomainSpecD) -> bool {
    let (t, radius) = local_variable(x, d.point, d.epsilon);
    if !(t.modulus < radius) {
        return false;
    }
    if d.sigma.im == 0.0 {
        return true;
    }
    let ln_r = t.modulus.ln();
    // ln |x^σ| = Re σ ln|x| − Im σ arg x
    let ln_pow = d.sigma.re * ln_r - d.sigma.im * t.argument;
    let lower = -d.theta1 * d.sigma.im + d.sigma_tilde * ln_r;
    let upper = -d.theta2 * d.sigma.im;
    let slack = BOUNDARY_SLACK * (1.0 + ln_pow.abs() + lower.abs() + upper.abs());
    lower <= ln_pow + slack && ln_pow <= upper + slack
}

/// Strip `B(σ, a; θ₂, σ̃)`:
/// `|x| < 1` and `Re σ ln|x| + θ₂ Im σ <= Im σ arg x < (Re σ − 1) ln|x| + ln c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripB {
    pub sigma: Complex64,
    pub a: Complex64,
    pub theta2: f64,
    pub sigma_tilde: f64,
    pub ln_c: f64,
}

impl StripB {
    pub fn new(sigma: Complex64, a: Complex64, theta2: f64, sigma_tilde: f64) -> Self {
        Self {
            sigma,
            a,
            theta2,
            sigma_tilde,
            ln_c: 0.0,
        }
    }

    /// `ln c` making every point of `D(ε; σ; θ₁, θ₂, σ̃)` lie in the strip:
    /// `ln c = (1 − σ̃) ln ε + θ₁ Im σ`.
    pub fn ln_c_from_epsilon(epsilon: f64, theta1: f64, sigma: Complex64, sigma_tilde: f64) -> f64 {
        (1.0 - sigma_tilde) * epsilon.ln() + theta1 * sigma.im
    }

    pub fn contains(&self, x: CoveringPoint) -> bool {
        if !(x.modulus < 1.0) {
            return false;
        }
        let ln_r = x.modulus.ln();
        let mid = self.sigma.im * x.argument;
        let lower = self.sigma.re * ln_r + self.theta2 * self.sigma.im;
        let upper = (self.sigma.re - 1.0) * ln_r + self.ln_c;
        let slack = BOUNDARY_SLACK * (1.0 + mid.abs() + lower.abs());
        lower <= mid + slack && mid < upper
    }
}

/// Samples of the path `arg x = arg x₀ + ((Re σ − Σ)/Im σ) ln(|x|/|x₀|)`,
/// along which `|x^σ| = |x₀^σ| (|x|/|x₀|)^Σ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpiralPath {
    pub start: CoveringPoint,
    pub big_sigma: f64,
    pub sigma: Complex64,
    pub samples: Vec<CoveringPoint>,
}

impl SpiralPath {
    /// Argument on the path at modulus `r`.
    pub fn argument_at(&self, r: f64) -> f64 {
        spiral_argument(self.start, self.big_sigma, self.sigma, r)
    }
}

fn spiral_argument(start: CoveringPoint, big_sigma: f64, sigma: Complex64, r: f64) -> f64 {
    if sigma.im == 0.0 {
        start.argument
    } else {
        start.argument + (sigma.re - big_sigma) / sigma.im * (r / start.modulus).ln()
    }
}

/// `n` geometrically spaced samples from `|x₀|` down to `min_modulus`.
///
/// `Σ` must lie in `[0, 1)`; callers with a domain in hand should also keep
/// `Σ <= σ̃`.
pub fn make_spiral(
    start: CoveringPoint,
    big_sigma: f64,
    sigma: Complex64,
    n: usize,
    min_modulus: f64,
) -> Result<SpiralPath> {
    if !(0.0..1.0).contains(&big_sigma) {
        return Err(Error::InvalidInput(format!(
            "Sigma = {big_sigma} must lie in [0, sigma_tilde] with sigma_tilde < 1"
        )));
    }
    if n < 2 || !(min_modulus > 0.0 && min_modulus < start.modulus) {
        return Err(Error::InvalidInput(
            "spiral needs n >= 2 and 0 < min_modulus < |x0|".into(),
        ));
    }
    let ratio = (min_modulus / start.modulus).ln() / (n - 1) as f64;
    let samples = (0..n)
        .map(|k| {
            let r = if k == 0 {
                start.modulus
            } else {
                start.modulus * (ratio * k as f64).exp()
            };
            CoveringPoint::new(r, spiral_argument(start, big_sigma, sigma, r))
        })
        .collect();
    Ok(SpiralPath {
        start,
        big_sigma,
        sigma,
        samples,
    })
}

/// Leading terms `ŷ(t) = a t^{1−σ} + t/2 + t^{1+σ}/(16a)` and `dŷ/dt` in the
/// local variable; for `σ = 0` the amplitude is the full linear coefficient,
/// `ŷ = a t`.
pub fn eval_leading_local(
    t: CoveringPoint,
    sigma: Complex64,
    a: Complex64,
) -> Result<(Complex64, Complex64)> {
    if a.norm() == 0.0 {
        return Err(Error::InvalidInput("amplitude a must be nonzero".into()));
    }
    let tc = t.to_complex();
    if sigma.norm() == 0.0 {
        return Ok((a * tc, a));
    }
    let p1 = t.powc(ONE - sigma);
    let p2 = t.powc(ONE + sigma);
    let y = a * p1 + 0.5 * tc + p2 / (16.0 * a);
    let dy = a * (ONE - sigma) * p1 / tc + 0.5 + (ONE + sigma) * p2 / (16.0 * a * tc);
    Ok((y, dy))
}

/// Leading-order value and derivative `(y, dy/dx)` at `x` from the critical
/// data of any of the three points.
pub fn eval_leading(x: CoveringPoint, cd: &CriticalData) -> Result<(Complex64, Complex64)> {
    match cd.point {
        CriticalPoint::Zero => eval_leading_local(x, cd.sigma, cd.a),
        CriticalPoint::One => {
            let t = map_to_one(x);
            let (yh, dyh) = eval_leading_local(t, cd.sigma, cd.a)?;
            // y = 1 − ŷ(1 − x) so dy/dx = ŷ'(t)
            Ok((y_from_one(yh), dyh))
        }
        CriticalPoint::Infinity => {
            let t = map_to_infinity(x);
            let (yh, dyh) = eval_leading_local(t, cd.sigma, cd.a)?;
            let tc = t.to_complex();
            // y = ŷ(t)/t with t = 1/x so dy/dx = ŷ − t ŷ'
            Ok((y_from_infinity(yh, tc), yh - tc * dyh))
        }
    }
}

/// Bounded oscillatory amplitude along a `Σ = 0` path:
/// `a(x) = a₀ (1 + |x₀^σ| e^{iα}/(2a₀) + |x₀^σ|² e^{2iα}/(16a₀²))`,
/// `α = Re σ arg x + Im σ ln|x|`; returns `y = a(x) x^{1−σ}`.
pub fn eval_oscillatory(
    x: CoveringPoint,
    cd: &CriticalData,
    path: &SpiralPath,
) -> Result<Complex64> {
    if path.big_sigma != 0.0 || cd.sigma.im == 0.0 {
        return Err(Error::Precondition(
            "oscillatory form needs a Sigma = 0 path and Im sigma != 0".into(),
        ));
    }
    let expected_arg = path.argument_at(x.modulus);
    if (x.argument - expected_arg).abs() > 1e-9 * (1.0 + expected_arg.abs()) {
        return Err(Error::Precondition("x is not on the Sigma = 0 path".into()));
    }
    let amp = oscillatory_amplitude(x, cd, path.start);
    Ok(amp * x.powc(ONE - cd.sigma))
}

/// The amplitude `a(x)` alone.
pub fn oscillatory_amplitude(
    x: CoveringPoint,
    cd: &CriticalData,
    start: CoveringPoint,
) -> Complex64 {
    let s = cd.sigma;
    let m = start.abs_pow(s);
    let alpha = s.re * x.argument + s.im * x.modulus.ln();
    let e = Complex64::from_polar(1.0, alpha);
    let a0 = cd.a;
    a0 * (ONE + m * e / (2.0 * a0) + m * m * e * e / (16.0 * a0 * a0))
}

/// `x sin²((iσ/2) ln x − (i/2) ln(4a) − π/2)`, the trigonometric form of the
/// three leading terms.
pub fn eval_sin2_form(x: CoveringPoint, sigma: Complex64, a: Complex64) -> Complex64 {
    let arg = 0.5 * I * sigma * x.ln() - 0.5 * I * (4.0 * a).ln() - PI / 2.0;
    let s = arg.sin();
    x.to_complex() * s * s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn dom(sigma: Complex64, eps: f64) -> DomainSpecD {
        DomainSpecD {
            epsilon: eps,
            theta1: 0.0,
            theta2: 0.0,
            sigma_tilde: 0.9,
            sigma,
            point: CriticalPoint::Zero,
        }
    }

    #[test]
    fn domain_examples() {
        let d = dom(c(0.5, 0.0), 0.1);
        assert!(domain_contains(CoveringPoint::new(0.05, 7.0 * PI), &d));
        let d = dom(c(0.5, 0.5), 0.1);
        assert!(domain_contains(CoveringPoint::new(0.01, 0.0), &d));
        assert!(!domain_contains(CoveringPoint::new(0.01, -20.0), &d));
        let mut inf = d;
        inf.point = CriticalPoint::Infinity;
        inf.epsilon = 10.0;
        assert!(domain_contains(CoveringPoint::new(100.0, 0.0), &inf));
        assert!(!domain_contains(CoveringPoint::new(5.0, 0.0), &inf));
    }

    #[test]
    fn spiral_examples() {
        let start = CoveringPoint::new(0.1, 0.3);
        let p = make_spiral(start, 0.0, c(0.4, 0.0), 5, 1e-4).unwrap();
        assert!(p.samples.iter().all(|s| s.argument == 0.3));
        let p = make_spiral(start, 0.5, c(0.5, 0.5), 5, 1e-4).unwrap();
        assert!(p.samples.iter().all(|s| (s.argument - 0.3).abs() < 1e-15));
        let s = c(1.0, 0.6);
        let p = make_spiral(start, 0.0, s, 20, 1e-6).unwrap();
        let m0 = start.abs_pow(s);
        for x in &p.samples {
            assert!((x.abs_pow(s) / m0 - 1.0).abs() < 1e-12);
        }
        assert!(p.samples.last().unwrap().argument < start.argument - 10.0);
        assert!(make_spiral(start, 1.2, s, 5, 1e-4).is_err());
    }

    #[test]
    fn leading_examples() {
        let (y, dy) =
            eval_leading_local(CoveringPoint::real(1e-4), c(0.5, 0.0), c(1.0, 0.0)).unwrap();
        assert!((y.re - (1e-2 + 5e-5 + 6.25e-8)).abs() < 1e-17);
        let h = 1e-9;
        let (yp, _) =
            eval_leading_local(CoveringPoint::real(1e-4 + h), c(0.5, 0.0), c(1.0, 0.0)).unwrap();
        let (ym, _) =
            eval_leading_local(CoveringPoint::real(1e-4 - h), c(0.5, 0.0), c(1.0, 0.0)).unwrap();
        assert!(((yp - ym) / (2.0 * h) - dy).norm() < 1e-5 * dy.norm());
        let (y, dy) =
            eval_leading_local(CoveringPoint::real(0.01), c(0.0, 0.0), c(0.5, 0.0)).unwrap();
        assert!((y - 0.005).norm() < 1e-18 && (dy - 0.5).norm() == 0.0);
        // σ ↦ −σ, a ↦ 1/(16a) permutes the two outer terms.
        let x = CoveringPoint::new(1e-3, 0.4);
        let (s, a) = (c(0.3, 0.2), c(0.7, -0.1));
        let (y1, _) = eval_leading_local(x, s, a).unwrap();
        let (y2, _) = eval_leading_local(x, -s, 1.0 / (16.0 * a)).unwrap();
        assert!((y1 - y2).norm() < 1e-15);
    }

    #[test]
    fn maps_and_rational_transport() {
        assert!((map_to_one(CoveringPoint::real(0.9)).modulus - 0.1).abs() < 1e-15);
        assert!((map_to_infinity(CoveringPoint::real(10.0)).modulus - 0.1).abs() < 1e-15);
        // y = ax/(1 − (1−a)x) solves the μ = 1 equation; ŷ(t) = 1 − y(1 − t) is
        // the same family with a ↦ 1/a, and t·y(1/t) with a ↦ a/(a − 1).
        let a = c(0.3, 0.0);
        let y = |x: Complex64| a * x / (1.0 - (1.0 - a) * x);
        let t = c(0.2, 0.0);
        let yh1 = 1.0 - y(1.0 - t);
        let b = 1.0 / a;
        assert!((yh1 - b * t / (1.0 - (1.0 - b) * t)).norm() < 1e-15);
        assert!((y_from_one(yh1) - y(1.0 - t)).norm() < 1e-15);
        let yh_inf = t * y(1.0 / t);
        let b = a / (a - 1.0);
        assert!((yh_inf - b * t / (1.0 - (1.0 - b) * t)).norm() < 1e-15);
        assert!((y_from_infinity(yh_inf, t) - y(1.0 / t)).norm() < 1e-14);
    }

    #[test]
    fn oscillatory_forms_agree() {
        let cd = CriticalData::at_zero(c(0.6, 0.8), c(0.9, 0.3));
        let start = CoveringPoint::new(0.05, 0.2);
        let path = make_spiral(start, 0.0, cd.sigma, 10, 1e-8).unwrap();
        let mut amps = Vec::new();
        for x in &path.samples {
            let y = eval_oscillatory(*x, &cd, &path).unwrap();
            let z = eval_sin2_form(*x, cd.sigma, cd.a);
            assert!((y - z).norm() <= 1e-12 * z.norm());
            amps.push(oscillatory_amplitude(*x, &cd, start).norm());
        }
        let max = amps.iter().cloned().fold(0.0, f64::max);
        let min = amps.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(max / min < 10.0 && max < 10.0);
        let tiny = CoveringPoint::new(1e-30, 0.0);
        let far = make_spiral(tiny, 0.0, c(0.6, 0.0), 2, 1e-31);
        assert!(far.is_ok());
        let cd_small = CriticalData::at_zero(c(0.6, 0.8), c(0.9, 0.3));
        let amp = oscillatory_amplitude(tiny, &cd_small, tiny);
        assert!((amp - cd_small.a).norm() < 1e-10);
    }

    #[test]
    fn strip_contains_domain() {
        let sigma = c(0.4, 0.7);
        let (eps, th1, th2, st) = (0.05, 0.5, -0.5, 0.8);
        let d = DomainSpecD {
            epsilon: eps,
            theta1: th1,
            theta2: th2,
            sigma_tilde: st,
            sigma,
            point: CriticalPoint::Zero,
        };
        let mut b = StripB::new(sigma, c(1.0, 0.0), th2, st);
        b.ln_c = StripB::ln_c_from_epsilon(eps, th1, sigma, st);
        let mut inside = 0;
        for i in 0..60 {
            for j in 0..80 {
                let r = eps * (-(i as f64) * 0.3).exp();
                let arg = -60.0 + j as f64 * 1.5;
                let x = CoveringPoint::new(r * 0.999, arg);
                if domain_contains(x, &d) {
                    inside += 1;
                    assert!(b.contains(x));
                }
            }
        }
        assert!(inside > 50);
    }
}
