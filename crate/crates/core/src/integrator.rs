//! Numerical continuation of PVIμ along paths on the universal covering,
//! pole-proximity events, residual evaluation and local fits of the
//! critical data `(σ, a)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use crate::asymptotic::{map_to_infinity, map_to_one};
use crate::connection::CriticalPoint;
use crate::covering::CoveringPoint;
use crate::error::{Error, Result};
use crate::lsq::least_squares;
use crate::monodromy::Mu;
use crate::ode::Dopri5;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
/// Distance below which `y ∈ {0, 1, x}` makes the right-hand side undefined.
const SINGULAR_TOL: f64 = 1e-300;
/// Closest approach to `x = 1` allowed for a path segment.
const NEAR_ONE_TOL: f64 = 1e-8;
const SEGMENT_PROBES: usize = 2000;

/// Point of a solution: position on the covering, value and `dy/dx`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OdeState {
    pub x: CoveringPoint,
    pub y: Complex64,
    pub dy: Complex64,
}

/// `y''` from PVIμ with `α = (2μ−1)²/2, β = γ = 0, δ = 1/2`.
pub fn pvi_rhs(s: &OdeState, mu: &Mu) -> Result<Complex64> {
    let x = s.x.to_complex();
    let (y, p) = (s.y, s.dy);
    let (ym1, ymx, xm1) = (y - ONE, y - x, x - ONE);
    if y.norm() < SINGULAR_TOL || ym1.norm() < SINGULAR_TOL || ymx.norm() < SINGULAR_TOL {
        return Err(Error::Singular(format!(
            "y = {y} hits a fixed singularity at x = {x}"
        )));
    }
    let two_mu = 2.0 * mu.value - ONE;
    let bracket = 0.5 * (two_mu * two_mu + x * xm1 / (ymx * ymx));
    Ok(
        0.5 * (1.0 / y + 1.0 / ym1 + 1.0 / ymx) * p * p - (1.0 / x + 1.0 / xm1 + 1.0 / ymx) * p
            + y * ym1 * ymx / (x * x * xm1 * xm1) * bracket,
    )
}

/// Residual `|y'' − rhs| / (1 + |y''|)`, scaled so that solutions with
/// singular second derivatives at the critical points can be compared.
pub fn pvi_residual(s: &OdeState, d2y: Complex64, mu: &Mu) -> Result<f64> {
    Ok((d2y - pvi_rhs(s, mu)?).norm() / (1.0 + d2y.norm()))
}

/// Piecewise path through covering points; each segment is linear in
/// `(ln|x|, arg x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathPlan {
    pub waypoints: Vec<CoveringPoint>,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub pole_guard: f64,
}

impl PathPlan {
    pub const DEFAULT_REL_TOL: f64 = 1e-12;
    pub const DEFAULT_ABS_TOL: f64 = 1e-14;
    pub const DEFAULT_POLE_GUARD: f64 = 1e-4;

    pub fn new(waypoints: Vec<CoveringPoint>) -> Self {
        Self {
            waypoints,
            rel_tol: Self::DEFAULT_REL_TOL,
            abs_tol: Self::DEFAULT_ABS_TOL,
            pole_guard: Self::DEFAULT_POLE_GUARD,
        }
    }

    /// `n` waypoints after `from`, evenly spaced in `(ln|x|, arg x)` and ending at `to`.
    pub fn log_segments(from: CoveringPoint, to: CoveringPoint, n: usize) -> Self {
        let n = n.max(1);
        let (l0, l1) = (from.modulus.ln(), to.modulus.ln());
        let pts = (1..=n)
            .map(|k| {
                let s = k as f64 / n as f64;
                if k == n {
                    to
                } else {
                    CoveringPoint::new(
                        (l0 + (l1 - l0) * s).exp(),
                        from.argument + (to.argument - from.argument) * s,
                    )
                }
            })
            .collect();
        Self::new(pts)
    }

    pub fn with_tol(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    /// `min(|y|, |y−1|, |y−x|)` fell below the guard.
    PoleProximity,
    /// `|y|` exceeded the inverse guard.
    Blowup,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub kind: EventKind,
    pub state: OdeState,
    /// Index of the segment that was halted.
    pub segment: usize,
}

/// Accepted states along the path, their local error estimates and any events.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub states: Vec<OdeState>,
    /// Local error estimate of each step relative to the tolerances; accepted
    /// steps have values `<= 1`, the seed has `0`.
    pub local_err: Vec<f64>,
    pub events: Vec<Event>,
    pub completed: bool,
}

impl Trace {
    pub fn last(&self) -> &OdeState {
        self.states.last().expect("trace holds at least the seed")
    }
}

fn segment_point(l0: f64, dl: f64, a0: f64, da: f64, tau: f64) -> CoveringPoint {
    CoveringPoint::new((l0 + dl * tau).exp(), a0 + da * tau)
}

fn pole_check(s: &OdeState, guard: f64) -> Option<EventKind> {
    let x = s.x.to_complex();
    // Near a critical point the solution legitimately approaches 0, 1 or x;
    // the guard shrinks with the distance to the nearest one.
    let scale = 1.0f64.min(s.x.modulus).min((x - ONE).norm());
    let d = s.y.norm().min((s.y - ONE).norm()).min((s.y - x).norm());
    if d < guard * scale {
        Some(EventKind::PoleProximity)
    } else if s.y.norm() > 1.0 / guard {
        Some(EventKind::Blowup)
    } else {
        None
    }
}

/// Continues `seed` through the waypoints of `plan`, stopping at the first
/// pole-proximity event.
pub fn integrate(seed: OdeState, plan: &PathPlan, mu: &Mu) -> Result<Trace> {
    if !seed.y.is_finite() || !seed.dy.is_finite() {
        return Err(Error::InvalidInput("seed must be finite".into()));
    }
    pvi_rhs(&seed, mu)?;
    let mut trace = Trace {
        states: vec![seed],
        local_err: vec![0.0],
        events: Vec::new(),
        completed: true,
    };
    if let Some(kind) = pole_check(&seed, plan.pole_guard) {
        trace.events.push(Event {
            kind,
            state: seed,
            segment: 0,
        });
        trace.completed = false;
        return Ok(trace);
    }
    let solver = Dopri5::with_tol(plan.rel_tol, plan.abs_tol);
    let mut current = seed;
    for (segment, target) in plan.waypoints.iter().enumerate() {
        let (l0, a0) = (current.x.modulus.ln(), current.x.argument);
        let (dl, da) = (target.modulus.ln() - l0, target.argument - a0);
        if dl == 0.0 && da == 0.0 {
            continue;
        }
        let closest = (0..=SEGMENT_PROBES)
            .map(|k| {
                (segment_point(l0, dl, a0, da, k as f64 / SEGMENT_PROBES as f64).to_complex() - ONE)
                    .norm()
            })
            .fold(f64::INFINITY, f64::min);
        if closest < NEAR_ONE_TOL {
            return Err(Error::Precondition(format!(
                "segment {segment} passes through x = 1"
            )));
        }
        let dlog = Complex64::new(dl, da);
        let rhs = |tau: f64, u: &[Complex64; 2]| -> Result<[Complex64; 2]> {
            let x = segment_point(l0, dl, a0, da, tau);
            let dxdt = x.to_complex() * dlog;
            let s = OdeState {
                x,
                y: u[0],
                dy: u[1],
            };
            Ok([u[1] * dxdt, pvi_rhs(&s, mu)? * dxdt])
        };
        let mut halted = None;
        let states = &mut trace.states;
        let errs = &mut trace.local_err;
        let out = solver.solve(rhs, 0.0, 1.0, [current.y, current.dy], |tau, u, err| {
            let x = if tau == 1.0 {
                *target
            } else {
                segment_point(l0, dl, a0, da, tau)
            };
            let s = OdeState {
                x,
                y: u[0],
                dy: u[1],
            };
            states.push(s);
            errs.push(err);
            if let Some(kind) = pole_check(&s, plan.pole_guard) {
                halted = Some(Event {
                    kind,
                    state: s,
                    segment,
                });
                return Ok(false);
            }
            Ok(true)
        })?;
        if let Some(ev) = halted {
            trace.events.push(ev);
            trace.completed = false;
            return Ok(trace);
        }
        debug_assert!(out.completed);
        current = *trace.last();
    }
    Ok(trace)
}

/// Result of a local power-law fit `ŷ ≈ â t^{1−σ̂}` at a critical point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalFit {
    pub sigma_hat: Complex64,
    pub a_hat: Complex64,
    /// Fitted exponent of the relative correction; `NaN` when the plain
    /// power law leaves no measurable residual.
    pub delta_hat: f64,
    pub rms: f64,
    pub points: usize,
}

/// Fit configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    /// Extra exponents `p` whose terms `c_p t^p` are fitted alongside the power law.
    pub corrections: Vec<Complex64>,
    /// Largest residual rms accepted before the window is declared oscillatory.
    pub max_rms: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            corrections: Vec::new(),
            max_rms: 0.05,
        }
    }
}

/// Local variable and local solution at a critical point:
/// `(x, y)`, `(1−x, 1−y)` or `(1/x, y/x)`.
pub fn local_pair(s: &OdeState, point: CriticalPoint) -> (CoveringPoint, Complex64) {
    match point {
        CriticalPoint::Zero => (s.x, s.y),
        CriticalPoint::One => (map_to_one(s.x), ONE - s.y),
        CriticalPoint::Infinity => {
            let t = map_to_infinity(s.x);
            (t, t.to_complex() * s.y)
        }
    }
}

/// Regresses `ln ŷ` on `ln t` (plus optional corrections) over trace points
/// with `window.0 <= |t| <= window.1`, logs unwrapped along the trace.
pub fn fit_critical_data(
    trace: &[OdeState],
    point: CriticalPoint,
    window: (f64, f64),
    opts: &FitOptions,
) -> Result<CriticalFit> {
    let mut ts = Vec::new();
    let mut logs: Vec<Complex64> = Vec::new();
    for s in trace {
        let (t, yh) = local_pair(s, point);
        if t.modulus < window.0 || t.modulus > window.1 || yh.norm() == 0.0 {
            continue;
        }
        let mut l = yh.ln();
        if let Some(prev) = logs.last() {
            let turns = ((prev.im - l.im) / (2.0 * std::f64::consts::PI)).round();
            l.im += turns * 2.0 * std::f64::consts::PI;
        }
        ts.push(t);
        logs.push(l);
    }
    if ts.len() < 10 {
        return Err(Error::InsufficientData(format!(
            "{} trace points in the window, need at least 10",
            ts.len()
        )));
    }
    let solve = |corr: &[Complex64]| -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        let rows: Vec<Vec<Complex64>> = ts
            .iter()
            .map(|t| {
                let mut r = vec![ONE, t.ln()];
                r.extend(corr.iter().map(|p| t.powc(*p)));
                r
            })
            .collect();
        let c = least_squares(&rows, &logs)?;
        let res = rows
            .iter()
            .zip(&logs)
            .map(|(r, l)| l - r.iter().zip(&c).map(|(a, b)| a * b).sum::<Complex64>())
            .collect();
        Ok((c, res))
    };
    let (_, plain_res) = solve(&[])?;
    let (c, res) = solve(&opts.corrections)?;
    let rms = (res.iter().map(|r| r.norm_sqr()).sum::<f64>() / res.len() as f64).sqrt();
    if rms > opts.max_rms {
        return Err(Error::OscillatoryWindow(format!(
            "power-law residual rms {rms:.3e} exceeds {:.3e}; use the oscillatory tools",
            opts.max_rms
        )));
    }
    Ok(CriticalFit {
        sigma_hat: ONE - c[1],
        a_hat: c[0].exp(),
        delta_hat: residual_exponent(&ts, &plain_res),
        rms,
        points: ts.len(),
    })
}

/// Slope of `ln|r|` against `ln|t|`, or `NaN` without enough usable residuals.
fn residual_exponent(ts: &[CoveringPoint], res: &[Complex64]) -> f64 {
    let pts: Vec<(f64, f64)> = ts
        .iter()
        .zip(res)
        .filter(|(_, r)| r.norm() > 1e-13)
        .map(|(t, r)| (t.modulus.ln(), r.norm().ln()))
        .collect();
    if pts.len() < 3 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let (mx, my) = pts
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + x / n, b + y / n));
    let (sxy, sxx) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| {
        (a + (x - mx) * (y - my), b + (x - mx).powi(2))
    });
    if sxx == 0.0 {
        f64::NAN
    } else {
        sxy / sxx
    }
}

/// Relative step of the residual stencil.
pub const STENCIL_STEP: f64 = 1e-3;

/// Scaled PVI residuals of `y_fn` at `xs` using five-point radial stencils of
/// step `h_rel |x|`.
pub fn residual_scan<F>(y_fn: F, xs: &[CoveringPoint], mu: &Mu, h_rel: f64) -> Result<Vec<f64>>
where
    F: Fn(CoveringPoint) -> Result<Complex64>,
{
    xs.iter()
        .map(|x| {
            let h = x.to_complex() * h_rel;
            let f = |k: f64| y_fn(x.offset(h * k));
            let (fm2, fm1, f0, f1, f2) = (f(-2.0)?, f(-1.0)?, f(0.0)?, f(1.0)?, f(2.0)?);
            let dy = (fm2 - 8.0 * fm1 + 8.0 * f1 - f2) / (12.0 * h);
            let d2y = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * f1 - f2) / (12.0 * h * h);
            if !d2y.is_finite() || !dy.is_finite() {
                return Err(Error::Singular(format!(
                    "stencil at |x| = {} is not finite",
                    x.modulus
                )));
            }
            pvi_residual(&OdeState { x: *x, y: f0, dy }, d2y, mu)
        })
        .collect()
}

/// CSV with columns `|x|, arg x, Re y, Im y, Re y', Im y', local_err`, each
/// header line prefixed by `# `.
pub fn trace_to_csv(trace: &Trace, header: &[String]) -> String {
    let mut out = String::new();
    for h in header {
        let _ = writeln!(out, "# {h}");
    }
    out.push_str("abs_x,arg_x,re_y,im_y,re_dy,im_dy,local_err\n");
    for (s, e) in trace.states.iter().zip(&trace.local_err) {
        let _ = writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.6e}",
            s.x.modulus, s.x.argument, s.y.re, s.y.im, s.dy.re, s.dy.im, e
        );
    }
    out
}
