//! The 2×2 Fuchsian system `dY/dz = [A₀/z + Aₓ/(z−x) + A₁/(z−1)] Y` attached
//! to a transcendent, its monodromy by numeric loop integration, and the
//! triple read back from pair traces.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::covering::CoveringPoint;
use crate::error::{Error, Result};
use crate::integrator::Trace;
use crate::mat2::Mat2;
use crate::monodromy::{canonicalize, trace_check, MonodromyMatrixSet, MonodromyTriple, Mu};
use crate::ode::Dopri5;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);
/// Smallest `|y|`, `|y−1|`, `|y−x|` accepted by [`build_system`].
const Y_SINGULAR_TOL: f64 = 1e-12;
/// Default basepoint of the loops.
pub const DEFAULT_BASEPOINT: Complex64 = Complex64::new(-1.0, 0.0);
/// Loop-integration tolerances.
const LOOP_RTOL: f64 = 1e-12;
const LOOP_ATOL: f64 = 1e-14;

/// Residue matrices at `z = 0, x, 1` with the gauge scalar `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FuchsianSystem {
    pub x: CoveringPoint,
    pub a0: Mat2,
    pub ax: Mat2,
    pub a1: Mat2,
    pub k: Complex64,
    pub mu: Mu,
    /// `(φᵢ₁, φᵢ₃)` for `i = 0, x, 1`.
    pub phi: [[Complex64; 2]; 3],
    /// Auxiliary `A(x) = [y′x(x−1) − y(y−1)]/2` and `B(x) = A/(y(y−1)(y−x))`.
    pub aux_a: Complex64,
    pub aux_b: Complex64,
}

/// Largest deviations from the algebraic constraints of the system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    /// `max |tr Aᵢ|, |det Aᵢ|`.
    pub trace_det: f64,
    /// `|A₀ + Aₓ + A₁ + diag(μ, −μ)|`.
    pub sum: f64,
    /// `|[A(y; x)]₁₂|` relative to the largest `|(Aᵢ)₁₂/(y − uᵢ)|`.
    pub a12_at_y: f64,
}

impl InvariantReport {
    pub fn max(&self) -> f64 {
        self.trace_det.max(self.sum).max(self.a12_at_y)
    }
}

fn residue(mu: Complex64, p1: Complex64, p3: Complex64) -> Mat2 {
    Mat2::new(p1 * p3, -p3 * p3, p1 * p1, -p1 * p3).scale(-mu)
}

/// System for `u₁ = 0, u₂ = x, u₃ = 1` from `(y, y′)` at `x` and the gauge `k`.
/// Principal branches are used for every square root.
pub fn build_system(
    x: CoveringPoint,
    y: Complex64,
    dy: Complex64,
    mu: &Mu,
    k: Complex64,
) -> Result<FuchsianSystem> {
    let m = mu.value;
    if m.norm() == 0.0 {
        return Err(Error::InvalidInput(
            "mu = 0 has no associated Fuchsian system".into(),
        ));
    }
    if k.norm() == 0.0 || !k.is_finite() {
        return Err(Error::InvalidInput(
            "gauge k must be finite and nonzero".into(),
        ));
    }
    let xc = x.to_complex();
    let (ym1, ymx) = (y - ONE, y - xc);
    if y.norm() < Y_SINGULAR_TOL || ym1.norm() < Y_SINGULAR_TOL || ymx.norm() < Y_SINGULAR_TOL {
        return Err(Error::Singular(format!(
            "y = {y} coincides with 0, 1 or x = {xc}"
        )));
    }
    let aux_a = 0.5 * (dy * xc * (xc - ONE) - y * ym1);
    let aux_b = aux_a / (y * ym1 * ymx);
    let (sk, sx, s1x) = (k.sqrt(), xc.sqrt(), (ONE - xc).sqrt());
    let (sy, sym1, symx) = (y.sqrt(), ym1.sqrt(), ymx.sqrt());
    let m2 = m * m;
    let p13 = I * sk * sy / sx;
    let p23 = -sk * symx / (sx * s1x);
    let p33 = I * sk * sym1 / s1x;
    let p11 =
        I / (2.0 * m2) * sy / (sk * sx) * (aux_a * (aux_b + 2.0 * m / y) + m2 * (y - ONE - xc));
    let p21 = -1.0 / (2.0 * m2) * symx / (sk * sx * s1x)
        * (aux_a * (aux_b + 2.0 * m / ymx) + m2 * (y - ONE + xc));
    let p31 = I / (2.0 * m2) * sym1 / (sk * s1x)
        * (aux_a * (aux_b + 2.0 * m / ym1) + m2 * (y + ONE - xc));
    let fs = FuchsianSystem {
        x,
        a0: residue(m, p11, p13),
        ax: residue(m, p21, p23),
        a1: residue(m, p31, p33),
        k,
        mu: *mu,
        phi: [[p11, p13], [p21, p23], [p31, p33]],
        aux_a,
        aux_b,
    };
    if !fs.a0.max_abs().is_finite() || !fs.ax.max_abs().is_finite() || !fs.a1.max_abs().is_finite()
    {
        return Err(Error::Singular("residue matrices are not finite".into()));
    }
    Ok(fs)
}

impl FuchsianSystem {
    /// Coefficient matrix `A(z)`.
    pub fn matrix_at(&self, z: Complex64) -> Mat2 {
        let x = self.x.to_complex();
        self.a0.scale(ONE / z) + self.ax.scale(ONE / (z - x)) + self.a1.scale(ONE / (z - ONE))
    }

    pub fn invariants(&self, y: Complex64) -> InvariantReport {
        let x = self.x.to_complex();
        let mats = [self.a0, self.ax, self.a1];
        let trace_det = mats
            .iter()
            .map(|a| a.trace().norm().max(a.det().norm()))
            .fold(0.0, f64::max);
        let m = self.mu.value;
        let sum = (self.a0 + self.ax + self.a1 + Mat2::diag(m, -m)).max_abs();
        let terms = [
            self.a0.0[0][1] / y,
            self.ax.0[0][1] / (y - x),
            self.a1.0[0][1] / (y - ONE),
        ];
        let scale = terms
            .iter()
            .map(|t| t.norm())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let a12_at_y = terms.iter().sum::<Complex64>().norm() / scale;
        InvariantReport {
            trace_det,
            sum,
            a12_at_y,
        }
    }
}

/// `k = k₀ exp{(2μ−1) ∫ (y(ζ)−ζ)/(ζ(ζ−1)) dζ}` from the first state of the
/// trace (the lower limit) to the last, by the derivative-corrected
/// trapezoidal rule on the accepted steps.
pub fn gauge_k(trace: &Trace, k0: Complex64, mu: &Mu) -> Result<Complex64> {
    if trace.states.is_empty() {
        return Err(Error::InsufficientData("empty trace".into()));
    }
    let f = |z: Complex64, y: Complex64, dy: Complex64| {
        let d = z * (z - ONE);
        let v = (y - z) / d;
        (v, (dy - ONE) / d - v * (2.0 * z - ONE) / d)
    };
    let mut integral = Complex64::new(0.0, 0.0);
    for w in trace.states.windows(2) {
        let (z0, z1) = (w[0].x.to_complex(), w[1].x.to_complex());
        let (f0, d0) = f(z0, w[0].y, w[0].dy);
        let (f1, d1) = f(z1, w[1].y, w[1].dy);
        let h = z1 - z0;
        integral += 0.5 * h * (f0 + f1) + h * h / 12.0 * (d0 - d1);
    }
    let k = k0 * ((2.0 * mu.value - ONE) * integral).exp();
    if !k.is_finite() {
        return Err(Error::NonConvergence("gauge integral overflowed".into()));
    }
    Ok(k)
}

/// [`build_system`] at the last state of a trace, with `k` from [`gauge_k`].
pub fn build_from_trace(trace: &Trace, mu: &Mu, k0: Complex64) -> Result<FuchsianSystem> {
    let s = trace.last();
    build_system(s.x, s.y, s.dy, mu, gauge_k(trace, k0, mu)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LoopCenter {
    Zero,
    X,
    One,
}

/// Loop from `basepoint` to the circle `|z − center| = radius` (through `via`
/// when given), once around it, and back along the same path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoopSpec {
    pub basepoint: Complex64,
    pub center: LoopCenter,
    pub radius: f64,
    /// `+1` counter-clockwise, `−1` clockwise.
    pub orientation: i8,
    pub via: Option<Complex64>,
}

fn center_value(c: LoopCenter, x: Complex64) -> Complex64 {
    match c {
        LoopCenter::Zero => Complex64::new(0.0, 0.0),
        LoopCenter::X => x,
        LoopCenter::One => ONE,
    }
}

/// Default radius `min(|x|, |1−x|, 1)/3`.
pub fn default_radius(x: Complex64) -> f64 {
    x.norm().min((ONE - x).norm()).min(1.0) / 3.0
}

/// Loops around `0, x, 1` based at `−1`. The loop around `0` runs straight
/// along the negative axis; the loops around `x` and `1` reach their circles
/// from above through `c + ih`, `h = max(Im x, 0) + 1/2`.
pub fn default_loops(x: Complex64) -> [LoopSpec; 3] {
    let radius = default_radius(x);
    let h = x.im.max(0.0) + 0.5;
    let mk = |center, via| LoopSpec {
        basepoint: DEFAULT_BASEPOINT,
        center,
        radius,
        orientation: 1,
        via,
    };
    [
        mk(LoopCenter::Zero, None),
        mk(LoopCenter::X, Some(Complex64::new(x.re, h))),
        mk(LoopCenter::One, Some(Complex64::new(1.0, h))),
    ]
}

#[derive(Debug, Clone, Copy)]
enum Piece {
    Line(Complex64, Complex64),
    Arc {
        center: Complex64,
        radius: f64,
        start: f64,
        sweep: f64,
    },
}

impl Piece {
    fn at(&self, t: f64) -> (Complex64, Complex64) {
        match *self {
            Piece::Line(a, b) => (a + (b - a) * t, b - a),
            Piece::Arc {
                center,
                radius,
                start,
                sweep,
            } => {
                let e = Complex64::from_polar(radius, start + sweep * t);
                (center + e, I * sweep * e)
            }
        }
    }

    fn min_distance(&self, p: Complex64) -> f64 {
        (0..=200)
            .map(|i| (self.at(i as f64 / 200.0).0 - p).norm())
            .fold(f64::INFINITY, f64::min)
    }
}

fn loop_pieces(lp: &LoopSpec, x: Complex64) -> Result<Vec<Piece>> {
    if lp.orientation != 1 && lp.orientation != -1 {
        return Err(Error::InvalidInput(
            "loop orientation must be +1 or -1".into(),
        ));
    }
    let c = center_value(lp.center, x);
    let anchor = lp.via.unwrap_or(lp.basepoint);
    let dir = anchor - c;
    if dir.norm() <= lp.radius {
        return Err(Error::InvalidInput(
            "loop approach starts inside the circle".into(),
        ));
    }
    let start = dir.arg();
    let entry = c + Complex64::from_polar(lp.radius, start);
    let mut out = Vec::new();
    if let Some(v) = lp.via {
        out.push(Piece::Line(lp.basepoint, v));
    }
    out.push(Piece::Line(anchor, entry));
    out.push(Piece::Arc {
        center: c,
        radius: lp.radius,
        start,
        sweep: 2.0 * PI * lp.orientation as f64,
    });
    out.push(Piece::Line(entry, anchor));
    if let Some(v) = lp.via {
        out.push(Piece::Line(v, lp.basepoint));
    }
    let singular = [Complex64::new(0.0, 0.0), x, ONE];
    for p in &out {
        for s in singular {
            let own = matches!(p, Piece::Arc { .. }) && s == c;
            if !own && s != c && p.min_distance(s) < 0.5 * lp.radius {
                return Err(Error::Precondition(format!(
                    "loop around {c} passes within {:.3e} of {s}",
                    p.min_distance(s)
                )));
            }
        }
    }
    Ok(out)
}

/// Continuation of `Y(basepoint) = I` around one loop: the monodromy matrix.
pub fn loop_monodromy(fs: &FuchsianSystem, lp: &LoopSpec) -> Result<Mat2> {
    let x = fs.x.to_complex();
    let solver = Dopri5::with_tol(LOOP_RTOL, LOOP_ATOL);
    let mut y = Mat2::identity().entries();
    for piece in loop_pieces(lp, x)? {
        let rhs = |t: f64, e: &[Complex64; 4]| {
            let (z, dz) = piece.at(t);
            let m = fs.matrix_at(z) * Mat2::from_entries(*e);
            Ok(m.scale(dz).entries())
        };
        let out = solver.solve(rhs, 0.0, 1.0, y, |_, _, _| Ok(true))?;
        y = out.y;
    }
    Ok(Mat2::from_entries(y))
}

/// Monodromy around `0, x, 1` (in that order in `loops`), with
/// `M∞ = (M₁MₓM₀)⁻¹`.
pub fn numeric_monodromy(fs: &FuchsianSystem, loops: &[LoopSpec; 3]) -> Result<MonodromyMatrixSet> {
    let order = [LoopCenter::Zero, LoopCenter::X, LoopCenter::One];
    let base = loops[0].basepoint;
    for (l, c) in loops.iter().zip(order) {
        if l.center != c || l.basepoint != base {
            return Err(Error::InvalidInput(
                "loops must encircle 0, x, 1 in order from a common basepoint".into(),
            ));
        }
    }
    let m0 = loop_monodromy(fs, &loops[0])?;
    let mx = loop_monodromy(fs, &loops[1])?;
    let m1 = loop_monodromy(fs, &loops[2])?;
    Ok(MonodromyMatrixSet::from_finite(m0, mx, m1))
}

/// Triple from `2 − xᵢ² = tr(MⱼMₖ)`, canonicalized.
pub fn traces_to_triple(ms: &MonodromyMatrixSet) -> Result<MonodromyTriple> {
    canonicalize(&trace_check(ms))
}

/// `(tr M₀Mₓ, tr MₓM₁, tr M₀M₁)`.
pub fn pair_traces(ms: &MonodromyMatrixSet) -> [Complex64; 3] {
    [
        (ms.m0 * ms.mx).trace(),
        (ms.mx * ms.m1).trace(),
        (ms.m0 * ms.m1).trace(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn picard(x: f64) -> (CoveringPoint, Complex64, Complex64) {
        let y = x.sqrt();
        (
            CoveringPoint::real(x),
            Complex64::new(y, 0.0),
            Complex64::new(0.5 / y, 0.0),
        )
    }

    #[test]
    fn invariants_on_picard() {
        let mu = Mu::real(0.5).unwrap();
        let (x, y, dy) = picard(0.3);
        let fs = build_system(x, y, dy, &mu, ONE).unwrap();
        let r = fs.invariants(y);
        assert!(
            r.trace_det < 1e-12 && r.sum < 1e-12 && r.a12_at_y < 1e-12,
            "{r:?}"
        );
        let fs = build_system(
            CoveringPoint::new(0.2, 0.4),
            Complex64::new(0.3, 0.1),
            Complex64::new(-0.7, 2.0),
            &Mu::new(Complex64::new(0.3, 0.2)).unwrap(),
            Complex64::new(2.0, -1.0),
        )
        .unwrap();
        assert!(fs.invariants(Complex64::new(0.3, 0.1)).max() < 1e-12);
        assert!(build_system(x, ONE, dy, &mu, ONE).is_err());
    }

    #[test]
    fn picard_pair_traces() {
        let mu = Mu::real(0.5).unwrap();
        let (x, y, dy) = picard(0.3);
        let fs = build_system(x, y, dy, &mu, ONE).unwrap();
        let ms = numeric_monodromy(&fs, &default_loops(x.to_complex())).unwrap();
        for m in [ms.m0, ms.mx, ms.m1] {
            assert!((m.det() - 1.0).norm() < 1e-8 && (m.trace() - 2.0).norm() < 1e-6);
        }
        let tr = pair_traces(&ms);
        for (t, e) in tr.iter().zip([0.0, 2.0, 0.0]) {
            assert!((t - e).norm() < 1e-6, "{tr:?}");
        }
        let s2 = 2f64.sqrt();
        let t = traces_to_triple(&ms).unwrap();
        assert!(
            t.class_distance(&MonodromyTriple::real(s2, 0.0, s2)) < 1e-5,
            "{t:?}"
        );
    }

    #[test]
    fn loop_geometry_checks() {
        let x = Complex64::new(0.3, 0.0);
        let mut bad = default_loops(x)[1];
        bad.via = None;
        assert!(loop_pieces(&bad, x).is_err());
        assert!(loop_pieces(&default_loops(x)[2], x).is_ok());
    }
}
