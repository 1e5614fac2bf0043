//! Connection formulae between monodromy triples and critical data `(σ, a)`
//! at `x = 0, 1, ∞`, the `σ ↦ ±σ + 2n` aliases and the braid action on `(σ, a)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::monodromy::{
    canonicalize, is_admissible, relation_residual, MonodromyTriple, Mu, ZERO_TOL,
};
use crate::special::gamma;

/// Distance below which `σ` is treated as exactly `0` or `±2μ + 2m`.
pub const CASE_TOL: f64 = 1e-8;
/// Upper edge of the band in which the generic formulae are flagged as ill-conditioned.
pub const ILL_CONDITIONED_TOL: f64 = 1e-5;
/// Largest admissible relation residual accepted by [`inverse`].
pub const RELATION_TOL: f64 = 1e-8;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Critical point at which the data is attached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CriticalPoint {
    Zero,
    One,
    Infinity,
}

/// Exponent and amplitude of the critical behaviour `y ~ a x^{1−σ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalData {
    pub sigma: Complex64,
    pub a: Complex64,
    pub point: CriticalPoint,
}

impl CriticalData {
    pub fn at_zero(sigma: Complex64, a: Complex64) -> Self {
        Self {
            sigma,
            a,
            point: CriticalPoint::Zero,
        }
    }

    pub fn rel_distance(&self, other: &CriticalData) -> f64 {
        let ds = (self.sigma - other.sigma).norm() / self.sigma.norm().max(1.0);
        let da = (self.a - other.a).norm() / self.a.norm().max(1e-300);
        ds.max(da)
    }
}

/// Which formula family applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseKind {
    GenericI,
    ZeroII,
    III1,
    III2,
    III3,
    III4,
}

/// Case label with the integer `m` of the `σ = ±2μ + 2m` families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseTag {
    pub tag: CaseKind,
    pub m: i64,
}

impl CaseTag {
    fn new(tag: CaseKind, m: i64) -> Self {
        Self { tag, m }
    }
}

/// Result of [`inverse_detailed`] and [`forward_detailed`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Connection {
    pub data: CriticalData,
    pub triple: MonodromyTriple,
    pub case: CaseTag,
    /// `σ` lies within `[1e-8, 1e-5]` of a special value, where the generic
    /// formulae lose accuracy.
    pub ill_conditioned: bool,
    pub relation_residual: f64,
}

/// Real forbidden rays `(−∞, 0) ∪ [1, ∞)` for the exponent.
pub fn on_forbidden_ray(sigma: Complex64) -> bool {
    sigma.im == 0.0 && (sigma.re < 0.0 || sigma.re >= 1.0)
}

/// Solves `cos(πσ) = 1 − x₀²/2` in the band `0 <= Re σ <= 1`.
///
/// Real solutions lie in `[0, 1)`; on the band edges `Re σ ∈ {0, 1}` the
/// representative with `Im σ >= 0` is returned.
pub fn sigma_from_x0(x0: Complex64) -> Result<Complex64> {
    if (x0 - 2.0).norm() < ZERO_TOL || (x0 + 2.0).norm() < ZERO_TOL {
        return Err(Error::ExcludedValue(
            "x0 = ±2 corresponds to sigma = 1".into(),
        ));
    }
    let c = ONE - 0.5 * x0 * x0;
    let s0 = c.acos() / PI;
    // All solutions are ±s0 + 2n; pick the band member, ties by Im σ >= 0.
    let candidates = [s0, -s0, 2.0 - s0, s0 - 2.0, -s0 - 2.0, 2.0 + s0];
    let edge = 1e-12;
    let mut best: Option<Complex64> = None;
    for cand in candidates {
        if cand.re < -edge || cand.re > 1.0 + edge {
            continue;
        }
        best = match best {
            None => Some(cand),
            Some(b) => {
                if cand.im >= 0.0 && b.im < 0.0 {
                    Some(cand)
                } else {
                    Some(b)
                }
            }
        };
    }
    let mut s = best.ok_or_else(|| Error::ExcludedValue("no band representative".into()))?;
    s.re = s.re.clamp(0.0, 1.0);
    if s.im.abs() < 1e-15 {
        s.im = 0.0;
    }
    if on_forbidden_ray(s) {
        return Err(Error::ExcludedValue(
            "x0 = ±2 corresponds to sigma = 1".into(),
        ));
    }
    Ok(s)
}

fn gamma_or_pole(z: Complex64, case: &'static str, sigma: Complex64) -> Result<Complex64> {
    gamma(z).map_err(|_| Error::PoleCase {
        sigma: format!("{sigma}"),
        case,
    })
}

/// `f(σ, μ) = 2cos²(πσ/2) / (cos(πσ) − cos(2πμ))`.
pub fn f_factor(sigma: Complex64, mu: &Mu) -> Result<Complex64> {
    let den = (PI * sigma).cos() - (2.0 * PI * mu.value).cos();
    if den.norm() < 1e-14 {
        return Err(Error::PoleCase {
            sigma: format!("{sigma}"),
            case: "III",
        });
    }
    let c = (0.5 * PI * sigma).cos();
    Ok(2.0 * c * c / den)
}

/// `G(σ, μ) = (1/2) 4^σ Γ((σ+1)/2)² / (Γ(1 − μ + σ/2) Γ(μ + σ/2))`.
pub fn g_factor(sigma: Complex64, mu: &Mu) -> Result<Complex64> {
    let num = gamma_or_pole(0.5 * (sigma + 1.0), "III", sigma)?;
    let d1 = gamma_or_pole(ONE - mu.value + 0.5 * sigma, "III", sigma)?;
    let d2 = gamma_or_pole(mu.value + 0.5 * sigma, "III", sigma)?;
    let four_pow = (sigma * 4f64.ln()).exp();
    Ok(0.5 * four_pow * num * num / (d1 * d2))
}

/// `F(σ, μ) = f(σ, μ) (2G(σ, μ))²`.
pub fn big_f_factor(sigma: Complex64, mu: &Mu) -> Result<Complex64> {
    let f = f_factor(sigma, mu)?;
    let g = g_factor(sigma, mu)?;
    Ok(4.0 * f * g * g)
}

/// Integer `m` with `σ = s·2μ + 2m` if it exists, plus the distance to it.
fn special_m(sigma: Complex64, mu: &Mu, sign: f64) -> (i64, f64) {
    let h = 0.5 * (sigma - sign * 2.0 * mu.value);
    let m = h.re.round();
    let dist = 2.0 * (h - m).norm();
    (m as i64, dist)
}

/// Case of critical data `(σ, ·)` at 0, plus the distance from the nearest special value.
fn classify_sigma(sigma: Complex64, mu: &Mu) -> (Option<CaseTag>, f64) {
    let d0 = sigma.norm();
    let (mp, dp) = special_m(sigma, mu, 1.0);
    let (mm, dm) = special_m(sigma, mu, -1.0);
    let nearest = d0.min(dp).min(dm);
    if d0 < CASE_TOL {
        return (Some(CaseTag::new(CaseKind::ZeroII, 0)), nearest);
    }
    if dp < CASE_TOL {
        let tag = if mp >= 0 {
            CaseKind::III1
        } else {
            CaseKind::III2
        };
        return (Some(CaseTag::new(tag, mp)), nearest);
    }
    if dm < CASE_TOL {
        let tag = if mm >= 1 {
            CaseKind::III3
        } else {
            CaseKind::III4
        };
        return (Some(CaseTag::new(tag, mm)), nearest);
    }
    (None, nearest)
}

fn mu_is_integer(mu: &Mu) -> bool {
    mu.value.im.abs() < 1e-12 && (mu.value.re - mu.value.re.round()).abs() < 1e-12
}

/// `16^{p}` for complex `p`.
fn pow16(p: Complex64) -> Complex64 {
    (p * 16f64.ln()).exp()
}

/// Monodromy triple of the transcendent with critical data `(σ, a)` at `x = 0`.
pub fn forward(sigma: Complex64, a: Complex64, mu: &Mu) -> Result<MonodromyTriple> {
    Ok(forward_detailed(sigma, a, mu)?.triple)
}

/// [`forward`] with the case label and diagnostics.
pub fn forward_detailed(sigma: Complex64, a: Complex64, mu: &Mu) -> Result<Connection> {
    if on_forbidden_ray(sigma) {
        return Err(Error::ForbiddenRay(format!("{sigma}")));
    }
    if a.norm() == 0.0 || !a.re.is_finite() || !a.im.is_finite() {
        return Err(Error::InvalidInput("a must be finite and nonzero".into()));
    }
    let (case, nearest) = classify_sigma(sigma, mu);
    let sqrt_a = a.sqrt();
    let m_val = mu.value;
    let (case, raw) = match case {
        None => {
            let f = f_factor(sigma, mu)?;
            let g = g_factor(sigma, mu)?;
            let e = (-0.5 * I * PI * sigma).exp();
            let x0 = 2.0 * (0.5 * PI * sigma).sin();
            let x1 = I * (sqrt_a / (f * g) - g / sqrt_a);
            let xinf = sqrt_a / (f * g * e) + g * e / sqrt_a;
            (
                CaseTag::new(CaseKind::GenericI, 0),
                MonodromyTriple::new(x0, x1, xinf),
            )
        }
        Some(tag) => match tag.tag {
            CaseKind::ZeroII => {
                if mu_is_integer(mu) {
                    return Err(Error::Degenerate(
                        "sigma = 0 with integer mu gives the triple (0,0,0)".into(),
                    ));
                }
                let s = 2.0 * (PI * m_val).sin();
                (
                    tag,
                    MonodromyTriple::new(0.0.into(), s * (ONE - a).sqrt(), s * sqrt_a),
                )
            }
            CaseKind::III1 => {
                let m = tag.m as f64;
                let k = pow16(m_val + m) * gamma(m_val + m + 0.5)?.powi(2)
                    / (gamma((m + 1.0).into())? * gamma(2.0 * m_val + m)?);
                let x1 = -0.5 * I * k / sqrt_a;
                let x0 = 2.0 * (PI * m_val).sin();
                let xinf = I * x1 * (-I * PI * m_val).exp();
                (tag, MonodromyTriple::new(x0, x1, xinf))
            }
            CaseKind::III2 => {
                let m = tag.m as f64;
                let cos2 = (PI * m_val).cos().powi(2);
                let den = pow16(m_val + m)
                    * gamma(m_val + m + 0.5)?.powi(2)
                    * gamma(-2.0 * m_val - m + 1.0)?
                    * gamma((-m).into())?;
                let x1 = 2.0 * I * PI * PI / cos2 * sqrt_a / den;
                let x0 = 2.0 * (PI * m_val).sin();
                let xinf = -I * x1 * (I * PI * m_val).exp();
                (tag, MonodromyTriple::new(x0, x1, xinf))
            }
            CaseKind::III3 => {
                let m = tag.m as f64;
                let k = pow16(-m_val + m) * gamma(-m_val + m + 0.5)?.powi(2)
                    / (gamma(m - 2.0 * m_val + 1.0)? * gamma(m.into())?);
                let x1 = -0.5 * I * k / sqrt_a;
                let x0 = -2.0 * (PI * m_val).sin();
                let xinf = I * x1 * (I * PI * m_val).exp();
                (tag, MonodromyTriple::new(x0, x1, xinf))
            }
            CaseKind::III4 => {
                let m = tag.m as f64;
                let cos2 = (PI * m_val).cos().powi(2);
                let den = pow16(-m_val + m)
                    * gamma(-m_val + m + 0.5)?.powi(2)
                    * gamma(2.0 * m_val - m)?
                    * gamma((1.0 - m).into())?;
                let x1 = 2.0 * I * PI * PI / cos2 * sqrt_a / den;
                let x0 = -2.0 * (PI * m_val).sin();
                let xinf = -I * x1 * (-I * PI * m_val).exp();
                (tag, MonodromyTriple::new(x0, x1, xinf))
            }
            CaseKind::GenericI => unreachable!(),
        },
    };
    let triple = canonicalize(&raw)?;
    Ok(Connection {
        data: CriticalData::at_zero(sigma, a),
        triple,
        case,
        ill_conditioned: case.tag == CaseKind::GenericI && nearest < ILL_CONDITIONED_TOL,
        relation_residual: relation_residual(&triple, mu),
    })
}

/// Case-I amplitude for a given exponent, implemented verbatim:
/// `a = iG²/(2 sin πσ) [2(1 + e^{−iπσ}) − f (x∞² + e^{−iπσ} x₁²)] f`.
pub fn generic_amplitude(t: &MonodromyTriple, sigma: Complex64, mu: &Mu) -> Result<Complex64> {
    let f = f_factor(sigma, mu)?;
    let g = g_factor(sigma, mu)?;
    let e = (-I * PI * sigma).exp();
    let bracket = 2.0 * (ONE + e) - f * (t.xinf * t.xinf + e * t.x1 * t.x1);
    Ok(I * g * g / (2.0 * (PI * sigma).sin()) * bracket * f)
}

/// Solutions `X = s`, `Y = 1/s` of the two linear equations for `s`; their
/// product is identically one on the cubic surface.
pub fn compatibility_xy(
    t: &MonodromyTriple,
    sigma: Complex64,
    mu: &Mu,
) -> Result<(Complex64, Complex64)> {
    let f = f_factor(sigma, mu)?;
    let big_f = big_f_factor(sigma, mu)?;
    let e = (-I * PI * sigma).exp();
    let den = e * e - 1.0;
    let x1s = t.x1 * t.x1;
    let xis = t.xinf * t.xinf;
    let x = (2.0 * (ONE + e) - f * (x1s + xis * e)) / (big_f * den);
    let y = big_f * (f * e * (e * x1s + xis) - 2.0 * e * (ONE + e)) / den;
    Ok((x, y))
}

/// Critical data at `x = 0` of the transcendent with monodromy triple `t`.
pub fn inverse(t: &MonodromyTriple, mu: &Mu) -> Result<CriticalData> {
    Ok(inverse_detailed(t, mu)?.data)
}

/// [`inverse`] with the case label and diagnostics.
pub fn inverse_detailed(t: &MonodromyTriple, mu: &Mu) -> Result<Connection> {
    inverse_at(t, mu, CriticalPoint::Zero)
}

fn inverse_at(t: &MonodromyTriple, mu: &Mu, point: CriticalPoint) -> Result<Connection> {
    if !is_admissible(t) {
        return Err(Error::InadmissibleTriple(format!("{:?}", t.to_array())));
    }
    let res = relation_residual(t, mu);
    if res > RELATION_TOL * t.max_abs().powi(3).max(1.0) {
        return Err(Error::Precondition(format!(
            "triple violates the cubic relation (residual {res:.3e})"
        )));
    }
    let sigma = sigma_from_x0(t.x0)?;
    let (case, nearest) = classify_sigma(sigma, mu);
    let x1s = t.x1 * t.x1;
    let xis = t.xinf * t.xinf;
    let m_val = mu.value;
    let (case, a) = match case {
        None => (
            CaseTag::new(CaseKind::GenericI, 0),
            generic_amplitude(t, sigma, mu)?,
        ),
        Some(tag) if tag.tag == CaseKind::ZeroII => {
            if mu_is_integer(mu) {
                return Err(Error::Degenerate(
                    "x0 = 0 with integer mu: x1 = xinf = 0 is not admissible".into(),
                ));
            }
            let den = x1s + xis;
            if den.norm() < ZERO_TOL {
                return Err(Error::Degenerate("x1^2 + xinf^2 = 0".into()));
            }
            (tag, xis / den)
        }
        Some(_) => {
            if x1s.norm() < ZERO_TOL {
                return Err(Error::Degenerate(
                    "x1 = 0 in a resonant-exponent case".into(),
                ));
            }
            let minus = (xis + x1s * (-2.0 * I * PI * m_val).exp()).norm();
            let plus = (xis + x1s * (2.0 * I * PI * m_val).exp()).norm();
            let (mp, dp) = special_m(sigma, mu, 1.0);
            let (mm, dm) = special_m(sigma, mu, -1.0);
            let tag = if minus <= plus {
                if dp < CASE_TOL && mp >= 0 {
                    CaseTag::new(CaseKind::III1, mp)
                } else if dm < CASE_TOL && mm <= 0 {
                    CaseTag::new(CaseKind::III4, mm)
                } else {
                    return Err(Error::Degenerate(
                        "relation xinf^2 = -x1^2 e^{-2 pi i mu} has no band exponent".into(),
                    ));
                }
            } else if dp < CASE_TOL && mp <= -1 {
                CaseTag::new(CaseKind::III2, mp)
            } else if dm < CASE_TOL && mm >= 1 {
                CaseTag::new(CaseKind::III3, mm)
            } else {
                return Err(Error::Degenerate(
                    "relation xinf^2 = -x1^2 e^{2 pi i mu} has no band exponent".into(),
                ));
            };
            let m = tag.m as f64;
            let cos4 = (PI * m_val).cos().powi(4);
            let pi4 = PI.powi(4);
            let a = match tag.tag {
                CaseKind::III1 => {
                    -0.25 / x1s * pow16(2.0 * m_val + 2.0 * m) * gamma(m_val + m + 0.5)?.powi(4)
                        / (gamma((m + 1.0).into())?.powi(2) * gamma(2.0 * m_val + m)?.powi(2))
                }
                CaseKind::III2 => {
                    -cos4 / (4.0 * pi4)
                        * pow16(2.0 * m_val + 2.0 * m)
                        * gamma(m_val + m + 0.5)?.powi(4)
                        * gamma(-2.0 * m_val - m + 1.0)?.powi(2)
                        * gamma((-m).into())?.powi(2)
                        * x1s
                }
                CaseKind::III3 => {
                    -0.25 / x1s * pow16(-2.0 * m_val + 2.0 * m) * gamma(-m_val + m + 0.5)?.powi(4)
                        / (gamma(m - 2.0 * m_val + 1.0)?.powi(2) * gamma(m.into())?.powi(2))
                }
                CaseKind::III4 => {
                    -cos4 / (4.0 * pi4)
                        * pow16(-2.0 * m_val + 2.0 * m)
                        * gamma(-m_val + m + 0.5)?.powi(4)
                        * gamma(2.0 * m_val - m)?.powi(2)
                        * gamma((1.0 - m).into())?.powi(2)
                        * x1s
                }
                _ => unreachable!(),
            };
            (tag, a)
        }
    };
    if !(a.norm() > 0.0) || !a.re.is_finite() || !a.im.is_finite() {
        return Err(Error::Degenerate(format!(
            "amplitude a = {a} is not finite and nonzero"
        )));
    }
    Ok(Connection {
        data: CriticalData { sigma, a, point },
        triple: *t,
        case,
        ill_conditioned: case.tag == CaseKind::GenericI && nearest < ILL_CONDITIONED_TOL,
        relation_residual: res,
    })
}

/// Triple seen from `x = 1`: `(x₀, x₁, x∞) ↦ (x₁, x₀, x₀x₁ − x∞)`.
pub fn substitute_one(t: &MonodromyTriple) -> MonodromyTriple {
    MonodromyTriple::new(t.x1, t.x0, t.x0 * t.x1 - t.xinf)
}

/// Triple seen from `x = ∞`: `(x₀, x₁, x∞) ↦ (x∞, −x₁, x₀ − x₁x∞)`.
pub fn substitute_infinity(t: &MonodromyTriple) -> MonodromyTriple {
    MonodromyTriple::new(t.xinf, -t.x1, t.x0 - t.x1 * t.xinf)
}

/// Critical data at `x = 1`, for the variable `t = 1 − x` and `ŷ = 1 − y`.
pub fn connect_at_one(t: &MonodromyTriple, mu: &Mu) -> Result<CriticalData> {
    Ok(connect_at_one_detailed(t, mu)?.data)
}

pub fn connect_at_one_detailed(t: &MonodromyTriple, mu: &Mu) -> Result<Connection> {
    inverse_at(&substitute_one(t), mu, CriticalPoint::One)
}

/// Critical data at `x = ∞`, for the variable `t = 1/x` and `ŷ = t·y`.
pub fn connect_at_infinity(t: &MonodromyTriple, mu: &Mu) -> Result<CriticalData> {
    Ok(connect_at_infinity_detailed(t, mu)?.data)
}

pub fn connect_at_infinity_detailed(t: &MonodromyTriple, mu: &Mu) -> Result<Connection> {
    inverse_at(&substitute_infinity(t), mu, CriticalPoint::Infinity)
}

/// Braids whose action on `(σ, a)` has a closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SigmaBraid {
    Beta1Sq,
    Beta2Sq,
}

/// `β₁²: (σ, a) ↦ (σ, a e^{−2πiσ})`, the loop of `x` around `0`.
pub fn braid_on_sigma_a(cd: &CriticalData, braid: SigmaBraid) -> Result<CriticalData> {
    if cd.point != CriticalPoint::Zero {
        return Err(Error::UnsupportedBraid(
            "the (sigma, a) action is defined at x = 0".into(),
        ));
    }
    match braid {
        SigmaBraid::Beta1Sq => Ok(CriticalData {
            a: cd.a * (-2.0 * PI * I * cd.sigma).exp(),
            ..*cd
        }),
        SigmaBraid::Beta2Sq => Err(Error::UnsupportedBraid(
            "beta2^2 changes sigma; act on the triple instead".into(),
        )),
    }
}

/// Amplitude for the alias exponent `sign·σ + 2n`, recomputed from the triple.
///
/// Aliases on the real forbidden rays are rejected, except the pure reflection
/// `σ ↦ −σ` (`n = 0`), which is always evaluated so that the reciprocity
/// `16 a(σ) a(−σ) = 1` can be checked for real exponents too.
pub fn alias(
    cd: &CriticalData,
    n: i64,
    sign: i8,
    t: &MonodromyTriple,
    mu: &Mu,
) -> Result<CriticalData> {
    let s = if sign >= 0 { cd.sigma } else { -cd.sigma };
    let sigma = s + 2.0 * n as f64;
    if on_forbidden_ray(sigma) && n != 0 {
        return Err(Error::ForbiddenRay(format!("{sigma}")));
    }
    if n == 0 && sign >= 0 {
        return Ok(*cd);
    }
    let a = generic_amplitude(t, sigma, mu)?;
    Ok(CriticalData {
        sigma,
        a,
        point: cd.point,
    })
}

/// Aliases `±σ + 2n`, `|n| <= n_max`, that avoid the forbidden rays and the
/// poles of the generic formula.
pub fn alias_list(
    cd: &CriticalData,
    t: &MonodromyTriple,
    mu: &Mu,
    n_max: i64,
) -> Vec<CriticalData> {
    let mut out = Vec::new();
    for n in -n_max..=n_max {
        for sign in [1i8, -1] {
            if n == 0 && sign > 0 {
                continue;
            }
            if let Ok(al) = alias(cd, n, sign, t, mu) {
                if !on_forbidden_ray(al.sigma) {
                    out.push(al);
                }
            }
        }
    }
    out
}
