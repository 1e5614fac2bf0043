//! Elliptic representation `y = ℘(ν₁ω₁ + ν₂ω₂ + v; ω₁, ω₂) + (1+x)/3`:
//! the correction `v` from the integral equations along the path `L(x)`,
//! Picard's `μ = 1/2` family, the leading-term classification along the
//! path family `𝒱`, and the `1/cosh²` form.

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};

use crate::covering::CoveringPoint;
use crate::error::{Error, Result};
use crate::integrator::{residual_scan, STENCIL_STEP};
use crate::lsq::least_squares;
use crate::monodromy::{MonodromyTriple, Mu};
use crate::special::{g_function, half_periods, hyp_f, wp, SERIES_RADIUS};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const LN_16: f64 = 4.0 * LN_2;
/// Nodes per Gauss–Legendre panel.
const PANEL_DEGREE: usize = 20;
/// Neglected tail of the path integrals, relative to an `O(1)` integrand.
const TAIL_TOL: f64 = 1e-20;
const SCRIPT_F_MAX_TERMS: usize = 20_000;
/// Tolerance used when comparing `𝒱` or `ν₂` against the classification boundaries.
const CLASS_TOL: f64 = 1e-12;

fn pow16(c: Complex64) -> Complex64 {
    (c * LN_16).exp()
}

/// Parameters `(ν₁, ν₂)` with `A = e^{−iπν₁}/16^{2−ν₂}` and `B = e^{iπν₁}/16^{ν₂}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticData {
    pub nu1: Complex64,
    pub nu2: Complex64,
    pub a: Complex64,
    pub b: Complex64,
}

impl EllipticData {
    /// Rejects `ν₂ ∈ (−∞, 0] ∪ [2, +∞)`.
    pub fn new(nu1: Complex64, nu2: Complex64) -> Result<Self> {
        if nu2.im == 0.0 && (nu2.re <= 0.0 || nu2.re >= 2.0) {
            return Err(Error::ExcludedValue(format!(
                "nu2 = {} lies in (-inf, 0] U [2, +inf)",
                nu2.re
            )));
        }
        if !nu1.is_finite() || !nu2.is_finite() {
            return Err(Error::InvalidInput("nu1, nu2 must be finite".into()));
        }
        Ok(Self {
            nu1,
            nu2,
            a: (-I * PI * nu1).exp() / pow16(2.0 * ONE - nu2),
            b: (I * PI * nu1).exp() / pow16(nu2),
        })
    }

    /// `(A x^{2−ν₂}, B x^{ν₂})` on the sheet of `x`.
    pub fn yz(&self, x: CoveringPoint) -> (Complex64, Complex64) {
        (
            self.a * x.powc(2.0 * ONE - self.nu2),
            self.b * x.powc(self.nu2),
        )
    }

    /// `|x| + |A x^{2−ν₂}| + |B x^{ν₂}|`.
    pub fn scale(&self, x: CoveringPoint) -> f64 {
        x.modulus
            + self.a.norm() * x.abs_pow(2.0 * ONE - self.nu2)
            + self.b.norm() * x.abs_pow(self.nu2)
    }

    /// Critical data at 0, `σ = 1 − ν₂`, `a = −(1/4) e^{iπν₁} 16^{1−ν₂}`.
    pub fn critical_data(&self) -> (Complex64, Complex64) {
        (
            ONE - self.nu2,
            -0.25 * (I * PI * self.nu1).exp() * pow16(ONE - self.nu2),
        )
    }
}

/// Domain `𝒟(r; ν₁, ν₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainSpecScriptD {
    pub r: f64,
    pub ed: EllipticData,
}

/// `|x| < r`, `|A x^{2−ν₂}| < r` and `|B x^{ν₂}| < r`, all strict.
pub fn script_domain_contains(x: CoveringPoint, d: &DomainSpecScriptD) -> bool {
    let ed = &d.ed;
    x.modulus < d.r
        && ed.a.norm() * x.abs_pow(2.0 * ONE - ed.nu2) < d.r
        && ed.b.norm() * x.abs_pow(ed.nu2) < d.r
}

/// Quantities of `𝓕` that depend on `x` only.
#[derive(Debug, Clone, Copy)]
struct FContext {
    x: Complex64,
    g: Complex64,
    omega1: Complex64,
}

impl FContext {
    fn new(x: Complex64) -> Result<Self> {
        if x.norm() > SERIES_RADIUS {
            return Err(Error::OutOfRadius {
                modulus: x.norm(),
                radius: SERIES_RADIUS,
            });
        }
        Ok(Self {
            x,
            g: g_function(x)?,
            omega1: 0.5 * PI * hyp_f(x)?,
        })
    }
}

fn script_f_ctx(ctx: &FContext, y: Complex64, z: Complex64, nu2: Complex64) -> Result<Complex64> {
    let big_y = y * ((2.0 * ONE - nu2) * ctx.g).exp();
    let big_z = z * (nu2 * ctx.g).exp();
    if !(big_y.norm() < 1.0) || !(big_z.norm() < 1.0) {
        return Err(Error::Precondition(format!(
            "script F needs |y e^((2-nu2)g)| < 1 and |z e^(nu2 g)| < 1, got {:.3e}, {:.3e}",
            big_y.norm(),
            big_z.norm()
        )));
    }
    let q = ctx.x * ctx.g.exp() / 16.0;
    let q2 = q * q;
    let z2 = big_z * big_z;
    let ratio = big_y.norm() * (1.0f64).max(z2.norm());
    let mut sum = ZERO;
    let (mut yn, mut z2n, mut q2n) = (ONE, ONE, ONE);
    for n in 1..=SCRIPT_F_MAX_TERMS {
        yn *= big_y;
        z2n *= z2;
        q2n *= q2;
        let nn = (n * n) as f64;
        let term = nn * yn * (z2n - ONE) / (ONE - q2n);
        sum += term;
        let nf = n as f64;
        let tail = nn * yn.norm() * (1.0 + z2n.norm()) / (1.0 - q2n.norm())
            * ((nf + 1.0) / nf).powi(2)
            * ratio
            / (1.0 - ratio);
        if tail <= 1e-17 * sum.norm().max(1e-300) || yn.norm() == 0.0 {
            let p = PI / ctx.omega1;
            let p2 = 0.5 * p;
            let last = big_z * (big_z + ONE) / (big_z - ONE).powi(3);
            return Ok(p * p * p * sum / (2.0 * I) + 4.0 * I * p2 * p2 * p2 * last);
        }
    }
    Err(Error::NonConvergence(
        "script F series did not converge".into(),
    ))
}

/// `𝓕(x, y, z)`: the `q`-expansion of `∂_u ℘(u/2)` with the phases
/// `y ↔ e^{iπ[−ν₁ + (2−ν₂)τ − v/ω₁]}`, `z ↔ e^{iπ[ν₁ + ν₂τ + v/ω₁]}` pulled out.
///
/// Holomorphic for `|x| <= 0.6`, `|e^{(2−ν₂)g} y| < 1`, `|e^{ν₂ g} z| < 1`.
pub fn script_f(x: Complex64, y: Complex64, z: Complex64, nu2: Complex64) -> Result<Complex64> {
    script_f_ctx(&FContext::new(x)?, y, z, nu2)
}

/// `𝓖(x, y, z, v) = 𝓕(x, y e^{−iπv/ω₁}, z e^{iπv/ω₁}) − 𝓕(x, y, z)`.
pub fn script_g(
    x: Complex64,
    y: Complex64,
    z: Complex64,
    v: Complex64,
    nu2: Complex64,
) -> Result<Complex64> {
    let ctx = FContext::new(x)?;
    script_g_ctx(&ctx, y, z, v, nu2, script_f_ctx(&ctx, y, z, nu2)?)
}

fn script_g_ctx(
    ctx: &FContext,
    y: Complex64,
    z: Complex64,
    v: Complex64,
    nu2: Complex64,
    f0: Complex64,
) -> Result<Complex64> {
    if v == ZERO {
        return Ok(ZERO);
    }
    let e = (I * PI * v / ctx.omega1).exp();
    Ok(script_f_ctx(ctx, y / e, z * e, nu2)? - f0)
}

/// `Φ(x, y, z) = α/(2(1−x)²) 𝓕(x, y, z)`.
pub fn phi_value(
    x: Complex64,
    y: Complex64,
    z: Complex64,
    nu2: Complex64,
    mu: &Mu,
) -> Result<Complex64> {
    let alpha = mu.alpha();
    if alpha == ZERO {
        return Ok(ZERO);
    }
    Ok(alpha / (2.0 * (ONE - x).powi(2)) * script_f(x, y, z, nu2)?)
}

/// `Ψ(x, y, z, v, w) = x(w + v/4)/(1−x) + α/(2(1−x)²) 𝓖(x, y, z, v)`.
pub fn psi_value(
    x: Complex64,
    y: Complex64,
    z: Complex64,
    v: Complex64,
    w: Complex64,
    nu2: Complex64,
    mu: &Mu,
) -> Result<Complex64> {
    let alpha = mu.alpha();
    let lin = x * (w + 0.25 * v) / (ONE - x);
    if alpha == ZERO {
        return Ok(lin);
    }
    Ok(lin + alpha / (2.0 * (ONE - x).powi(2)) * script_g(x, y, z, v, nu2)?)
}

/// Composite Gauss–Legendre rule on the path
/// `s(t) = |x| e^t e^{i(arg x + k t)}`, `t ∈ (−∞, 0]`, for integrals
/// `∫_{L(x)} f(s) ds/s = (1 + ik) ∫ f(s(t)) dt`.
#[derive(Debug, Clone)]
pub struct PathQuadrature {
    x: CoveringPoint,
    k: f64,
    /// `(t, weight)` for every node, panels in increasing `t`.
    nodes: Vec<(f64, f64)>,
    /// Indefinite-integration matrix on one panel, `∫_{start}^{t_i} ≈ Σ_j S_ij f_j`.
    partial: Vec<Vec<f64>>,
    degree: usize,
}

impl PathQuadrature {
    /// `decay` is the slowest exponential rate `c` with `|f(s(t))| <= C e^{ct}`;
    /// `rate` bounds `|d ln f/dt|` and sets the panel width.
    pub fn new(x: CoveringPoint, k: f64, decay: f64, rate: f64) -> Result<Self> {
        if !(decay > 0.0) || !rate.is_finite() {
            return Err(Error::InvalidInput(
                "path quadrature needs a positive decay rate".into(),
            ));
        }
        let degree = PANEL_DEGREE;
        let rule = GaussLegendre::new(degree).map_err(|e| Error::InvalidInput(e.to_string()))?;
        let mut base: Vec<(f64, f64)> = rule.as_node_weight_pairs().to_vec();
        base.sort_by(|a, b| a.0.total_cmp(&b.0));
        let span = (1.0 / (TAIL_TOL * decay)).ln() / decay;
        let width = (2.0 / rate.max(1e-3)).min(1.0);
        let panels = (span / width).ceil() as usize;
        let half = 0.5 * span / panels as f64;
        let mut nodes = Vec::with_capacity(panels * degree);
        for p in 0..panels {
            let mid = -span + (2 * p + 1) as f64 * half;
            nodes.extend(base.iter().map(|&(xi, wi)| (mid + half * xi, half * wi)));
        }
        // Legendre expansion of the nodal interpolant, integrated from −1.
        let partial = (0..degree)
            .map(|i| {
                let li = legendre_all(base[i].0, degree);
                (0..degree)
                    .map(|j| {
                        let lj = legendre_all(base[j].0, degree);
                        let mut s = 0.0;
                        for m in 0..degree {
                            let integral = if m == 0 {
                                base[i].0 + 1.0
                            } else {
                                (li[m + 1] - li[m - 1]) / (2 * m + 1) as f64
                            };
                            s += 0.5 * (2 * m + 1) as f64 * base[j].1 * lj[m] * integral;
                        }
                        s * half
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            x,
            k,
            nodes,
            partial,
            degree,
        })
    }

    /// Path through `x` with `arg s = arg x + ((Re ν₂ − ν*)/Im ν₂) ln(|s|/|x|)`;
    /// radial when `Im ν₂ = 0`.
    pub fn for_elliptic(x: CoveringPoint, nu2: Complex64, nu_star: f64) -> Result<Self> {
        let (k, star) = if nu2.im == 0.0 {
            (0.0, nu2.re)
        } else {
            ((nu2.re - nu_star) / nu2.im, nu_star)
        };
        if !(star > 0.0 && star < 2.0) {
            return Err(Error::InvalidInput(format!(
                "nu* = {star} must lie in (0, 2)"
            )));
        }
        let decay = star.min(2.0 - star).min(1.0);
        let stretch = (1.0 + k * k).sqrt();
        let rate = nu2.norm().max((2.0 * ONE - nu2).norm()).max(1.0) * stretch;
        Self::new(x, k, decay, rate)
    }

    /// Slope `k` of `arg s` against `ln|s|`.
    pub fn slope(&self) -> f64 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes on the covering, ordered from the far end of the path towards `x`.
    pub fn points(&self) -> Vec<CoveringPoint> {
        self.nodes
            .iter()
            .map(|&(t, _)| {
                CoveringPoint::new(self.x.modulus * t.exp(), self.x.argument + self.k * t)
            })
            .collect()
    }

    fn factor(&self) -> Complex64 {
        Complex64::new(1.0, self.k)
    }

    /// `∫_{L(x)} f(s) ds/s` from nodal values.
    pub fn integrate(&self, f: &[Complex64]) -> Complex64 {
        self.factor()
            * self
                .nodes
                .iter()
                .zip(f)
                .map(|(&(_, w), v)| v * w)
                .sum::<Complex64>()
    }

    /// `∫_{L(s_i)} f(s) ds/s` at every node `s_i`.
    pub fn cumulative(&self, f: &[Complex64]) -> Vec<Complex64> {
        let d = self.degree;
        let mut out = Vec::with_capacity(f.len());
        let mut acc = ZERO;
        for (p, chunk) in f.chunks(d).enumerate() {
            for i in 0..d {
                let local: Complex64 = (0..d).map(|j| chunk[j] * self.partial[i][j]).sum();
                out.push(self.factor() * (acc + local));
            }
            acc += (0..d)
                .map(|j| chunk[j] * self.nodes[p * d + j].1)
                .sum::<Complex64>();
        }
        out
    }
}

/// `P_0(x), …, P_n(x)`.
fn legendre_all(x: f64, n: usize) -> Vec<f64> {
    let mut p = vec![1.0, x];
    for m in 1..n {
        let next = ((2 * m + 1) as f64 * x * p[m] - m as f64 * p[m - 1]) / (m + 1) as f64;
        p.push(next);
    }
    p
}

/// Leading coefficients of `v ≈ a₁ x + b₀₁ (A x^{2−ν₂}) + c₀₁ (B x^{ν₂})`,
/// fitted to the solution along the path; diagnostic only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesDiagnostics {
    pub a1: Complex64,
    pub b01: Complex64,
    pub c01: Complex64,
}

/// Correction `v(x)` and `w = x dv/dx`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VSolution {
    pub v: Complex64,
    pub w: Complex64,
    pub iterations: usize,
    /// `|v| / (|x| + |A x^{2−ν₂}| + |B x^{ν₂}|)`.
    pub bound_ratio: f64,
    /// Ratio of the last two iteration increments.
    pub contraction: f64,
    pub diagnostics: Option<SeriesDiagnostics>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub tol: f64,
    /// Decay exponent `ν*` of the path for non-real `ν₂`.
    pub nu_star: f64,
    /// Radius of `𝒟(r)` the point must lie in.
    pub r: f64,
    pub max_iter: usize,
    /// Iterations after which a non-contracting sequence aborts.
    pub contraction_window: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            nu_star: 1.0,
            r: 0.05,
            max_iter: 60,
            contraction_window: 10,
        }
    }
}

/// Successive approximations for `w = ∫_{L(x)} (Φ + Ψ) ds/s`,
/// `v = ∫_{L(x)} w ds/s`, starting from `v = w = 0`.
pub fn solve_v(x: CoveringPoint, ed: &EllipticData, mu: &Mu, tol: f64) -> Result<VSolution> {
    solve_v_with(
        x,
        ed,
        mu,
        &SolveOptions {
            tol,
            ..SolveOptions::default()
        },
    )
}

pub fn solve_v_with(
    x: CoveringPoint,
    ed: &EllipticData,
    mu: &Mu,
    opts: &SolveOptions,
) -> Result<VSolution> {
    let dom = DomainSpecScriptD { r: opts.r, ed: *ed };
    if !script_domain_contains(x, &dom) {
        return Err(Error::Precondition(format!(
            "x = ({}, {}) is outside D(r = {})",
            x.modulus, x.argument, opts.r
        )));
    }
    let scale = ed.scale(x);
    let alpha = mu.alpha();
    if alpha == ZERO {
        return Ok(VSolution {
            v: ZERO,
            w: ZERO,
            iterations: 1,
            bound_ratio: 0.0,
            contraction: 0.0,
            diagnostics: None,
        });
    }
    let quad = PathQuadrature::for_elliptic(x, ed.nu2, opts.nu_star)?;
    let pts = quad.points();
    let mut ctxs = Vec::with_capacity(pts.len());
    let mut yz = Vec::with_capacity(pts.len());
    let mut f0 = Vec::with_capacity(pts.len());
    let mut phi = Vec::with_capacity(pts.len());
    for p in &pts {
        let ctx = FContext::new(p.to_complex())?;
        let (y, z) = ed.yz(*p);
        let f = script_f_ctx(&ctx, y, z, ed.nu2)?;
        phi.push(alpha / (2.0 * (ONE - ctx.x).powi(2)) * f);
        ctxs.push(ctx);
        yz.push((y, z));
        f0.push(f);
    }
    let n = pts.len();
    let (mut v, mut w) = (vec![ZERO; n], vec![ZERO; n]);
    let (mut v_end, mut w_end) = (ZERO, ZERO);
    let mut prev_diff = f64::INFINITY;
    let mut ratio = 0.0;
    for iter in 1..=opts.max_iter {
        let mut rhs = Vec::with_capacity(n);
        for j in 0..n {
            let ctx = &ctxs[j];
            let (y, z) = yz[j];
            let g = script_g_ctx(ctx, y, z, v[j], ed.nu2, f0[j])?;
            let psi = ctx.x * (w[j] + 0.25 * v[j]) / (ONE - ctx.x)
                + alpha / (2.0 * (ONE - ctx.x).powi(2)) * g;
            rhs.push(phi[j] + psi);
        }
        let w_new = quad.cumulative(&rhs);
        let w_end_new = quad.integrate(&rhs);
        let v_new = quad.cumulative(&w_new);
        let v_end_new = quad.integrate(&w_new);
        let diff = v_new
            .iter()
            .zip(&v)
            .chain(w_new.iter().zip(&w))
            .map(|(a, b)| (a - b).norm())
            .fold(
                (v_end_new - v_end).norm().max((w_end_new - w_end).norm()),
                f64::max,
            );
        if iter > 1 {
            ratio = diff / prev_diff;
        }
        v = v_new;
        w = w_new;
        v_end = v_end_new;
        w_end = w_end_new;
        if diff < opts.tol {
            return Ok(VSolution {
                v: v_end,
                w: w_end,
                iterations: iter,
                bound_ratio: v_end.norm() / scale,
                contraction: ratio,
                diagnostics: fit_series(&pts, &v, ed, x),
            });
        }
        if iter >= opts.contraction_window && ratio >= 1.0 {
            return Err(Error::NonContraction {
                iterations: iter,
                ratio,
            });
        }
        prev_diff = diff;
    }
    Err(Error::NonConvergence(format!(
        "v iteration did not reach tol {} in {} steps; shrink r",
        opts.tol, opts.max_iter
    )))
}

fn fit_series(
    pts: &[CoveringPoint],
    v: &[Complex64],
    ed: &EllipticData,
    x: CoveringPoint,
) -> Option<SeriesDiagnostics> {
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (p, val) in pts.iter().zip(v) {
        if p.modulus >= 1e-4 * x.modulus {
            let (y, z) = ed.yz(*p);
            rows.push(vec![p.to_complex(), y, z]);
            rhs.push(*val);
        }
    }
    let c = least_squares(&rows, &rhs).ok()?;
    Some(SeriesDiagnostics {
        a1: c[0],
        b01: c[1],
        c01: c[2],
    })
}

/// Value of the elliptic representation with the correction that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticValue {
    pub y: Complex64,
    pub v: VSolution,
}

/// `y = ℘(ν₁ω₁ + ν₂ω₂ + v; ω₁, ω₂) + (1+x)/3` with `v` from [`solve_v`].
pub fn eval_theorem3(x: CoveringPoint, ed: &EllipticData, mu: &Mu) -> Result<EllipticValue> {
    eval_theorem3_with(x, ed, mu, &SolveOptions::default())
}

pub fn eval_theorem3_with(
    x: CoveringPoint,
    ed: &EllipticData,
    mu: &Mu,
    opts: &SolveOptions,
) -> Result<EllipticValue> {
    let v = solve_v_with(x, ed, mu, opts)?;
    let hp = half_periods(x)?;
    let u = 2.0 * (ed.nu1 * hp.omega1 + ed.nu2 * hp.omega2 + v.v);
    let y = wp(u, &hp)? + (ONE + x.to_complex()) / 3.0;
    Ok(EllipticValue { y, v })
}

/// Scaled PVIμ residual of [`eval_theorem3`] at `x`, from a five-point radial
/// stencil; the iteration tolerance is tightened so that `v` varies smoothly
/// across the stencil.
pub fn theorem3_residual(
    x: CoveringPoint,
    ed: &EllipticData,
    mu: &Mu,
    opts: &SolveOptions,
) -> Result<f64> {
    let tight = SolveOptions {
        tol: opts.tol.min(1e-15),
        ..*opts
    };
    let r = residual_scan(
        |p| Ok(eval_theorem3_with(p, ed, mu, &tight)?.y),
        &[x],
        mu,
        STENCIL_STEP,
    )?;
    Ok(r[0])
}

/// Leading behaviour along the path family `𝒱`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorollaryClass {
    /// `−(1/4) e^{iπν₁} 16^{1−ν₂} x^{ν₂}`.
    TermNu2,
    /// `sin²(πν₁/2) x` for `ν₂ = 1`.
    TermX,
    /// `−(1/4) [e^{iπν₁} 16^{1−ν₂}]^{−1} x^{2−ν₂}`.
    Term2MinusNu2,
    /// `1/sin²(−i(ν₂/2) ln x + i(ν₂/2) ln 16 + πν₁/2 + …)`.
    OscillatoryV0,
    /// `1/sin²(i((2−ν₂)/2) ln x + i((ν₂−2)/2) ln 16 + πν₁/2 + …)`.
    OscillatoryV2,
    /// `x sin²(i((1−ν₂)/2) ln(x/16) + πν₁/2)`.
    BalancedV1,
}

pub fn corollary_classify(path_v: f64, ed: &EllipticData) -> Result<CorollaryClass> {
    if !(-CLASS_TOL..=2.0 + CLASS_TOL).contains(&path_v) {
        return Err(Error::InvalidInput(format!(
            "path exponent V = {path_v} must lie in [0, 2]"
        )));
    }
    let near = |a: f64, b: f64| (a - b).abs() <= CLASS_TOL;
    if ed.nu2.im == 0.0 {
        let n = ed.nu2.re;
        return Ok(if near(n, 1.0) {
            CorollaryClass::TermX
        } else if n < 1.0 {
            CorollaryClass::TermNu2
        } else {
            CorollaryClass::Term2MinusNu2
        });
    }
    Ok(if near(path_v, 0.0) {
        CorollaryClass::OscillatoryV0
    } else if near(path_v, 2.0) {
        CorollaryClass::OscillatoryV2
    } else if near(path_v, 1.0) {
        CorollaryClass::BalancedV1
    } else if path_v < 1.0 {
        CorollaryClass::TermNu2
    } else {
        CorollaryClass::Term2MinusNu2
    })
}

/// Leading-order value of the given class; the oscillatory forms omit the
/// `c₀ₘ`, `b₀ₘ` series.
pub fn corollary_leading(x: CoveringPoint, ed: &EllipticData, class: CorollaryClass) -> Complex64 {
    let (nu1, nu2) = (ed.nu1, ed.nu2);
    let phase = (I * PI * nu1).exp() * pow16(ONE - nu2);
    let xc = x.to_complex();
    let lnx = x.ln();
    match class {
        CorollaryClass::TermNu2 => -0.25 * phase * x.powc(nu2),
        CorollaryClass::Term2MinusNu2 => -0.25 / phase * x.powc(2.0 * ONE - nu2),
        CorollaryClass::TermX => (0.5 * PI * nu1).sin().powi(2) * xc,
        CorollaryClass::BalancedV1 => {
            xc * (0.5 * I * (ONE - nu2) * (lnx - LN_16) + 0.5 * PI * nu1)
                .sin()
                .powi(2)
        }
        CorollaryClass::OscillatoryV0 => {
            let s = (-0.5 * I * nu2 * lnx + 0.5 * I * nu2 * LN_16 + 0.5 * PI * nu1).sin();
            ONE / (s * s)
        }
        CorollaryClass::OscillatoryV2 => {
            let s = (0.5 * I * (2.0 * ONE - nu2) * lnx
                + 0.5 * I * (nu2 - 2.0) * LN_16
                + 0.5 * PI * nu1)
                .sin();
            ONE / (s * s)
        }
    }
}

fn picard_check(nu1: Complex64, nu2: Complex64) -> Result<()> {
    if nu1 == ZERO && nu2 == ZERO {
        return Err(Error::InvalidInput(
            "(nu1, nu2) must not both vanish".into(),
        ));
    }
    if !(0.0..2.0).contains(&nu1.re) || !(0.0..2.0).contains(&nu2.re) {
        return Err(Error::InvalidInput(
            "Picard parameters need 0 <= Re nu_i < 2".into(),
        ));
    }
    Ok(())
}

/// Picard's `μ = 1/2` solution `y = ℘(ν₁ω₁ + ν₂ω₂; ω₁, ω₂) + (1+x)/3`.
///
/// `(ν₁, ν₂) = (1, 1)` gives `y ≡ x`, which lies on the singular locus of the
/// equation and is rejected.
pub fn picard_closed_form(x: CoveringPoint, nu1: Complex64, nu2: Complex64) -> Result<Complex64> {
    picard_check(nu1, nu2)?;
    if nu1 == ONE && nu2 == ONE {
        return Err(Error::Degenerate(
            "(nu1, nu2) = (1, 1) gives y = x, the singular locus y = x".into(),
        ));
    }
    let hp = half_periods(x)?;
    Ok(wp(2.0 * (nu1 * hp.omega1 + nu2 * hp.omega2), &hp)? + (ONE + x.to_complex()) / 3.0)
}

/// Triple `x_i = −2 cos(π r_i)` of the Picard solution; the two branches of
/// the `r_i` are separated by the sign of `Re ν₁ − Re ν₂`.
pub fn picard_monodromy(nu1: Complex64, nu2: Complex64) -> Result<MonodromyTriple> {
    picard_check(nu1, nu2)?;
    let (r1, r2, r3) = if nu1.re > nu2.re {
        (0.5 * nu2, ONE - 0.5 * nu1, 0.5 * (nu1 - nu2))
    } else if nu1.re < nu2.re {
        (ONE - 0.5 * nu2, 0.5 * nu1, 0.5 * (nu2 - nu1))
    } else {
        return Err(Error::Degenerate(
            "Re nu1 = Re nu2 is not covered by the Picard monodromy formulas".into(),
        ));
    };
    let f = |r: Complex64| -2.0 * (PI * r).cos();
    Ok(MonodromyTriple::new(f(r1), f(r2), f(r3)))
}

/// Distance from the poles `iπ(n + 1/2)` of `1/cosh²` below which evaluation is refused.
pub const COSH_POLE_TOL: f64 = 1e-8;

/// `1/cosh²(((σ−1)/2) ln x + k/2 + v/2)`.
pub fn shimomura_eval(
    x: CoveringPoint,
    sigma: Complex64,
    k: Complex64,
    v: Complex64,
) -> Result<Complex64> {
    let zeta = 0.5 * (sigma - ONE) * x.ln() + 0.5 * k + 0.5 * v;
    let m = zeta / (I * PI) - 0.5;
    let nearest = Complex64::new(m.re.round(), 0.0);
    if (m - nearest).norm() * PI < COSH_POLE_TOL {
        return Err(Error::Precondition(format!(
            "cosh vanishes near zeta = {zeta}"
        )));
    }
    // 1/cosh²ζ = 4E/(1+E)² with E = e^{∓2ζ} chosen so that |E| <= 1.
    let e = if zeta.re >= 0.0 {
        (-2.0 * zeta).exp()
    } else {
        (2.0 * zeta).exp()
    };
    Ok(4.0 * e / ((ONE + e) * (ONE + e)))
}
