//! Dormand–Prince 5(4) stepping for complex-valued systems over a real
//! parameter, with an observer called after each accepted step.

use num_complex::Complex64;

use crate::error::{Error, Result};

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Step-size controller settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step as a fraction of the interval length.
    pub first_step: f64,
    /// Smallest admissible step as a fraction of the interval length.
    pub min_step: f64,
    pub max_steps: usize,
}

impl Default for Dopri5 {
    fn default() -> Self {
        Self {
            rtol: 1e-12,
            atol: 1e-14,
            first_step: 1e-3,
            min_step: 1e-14,
            max_steps: 1_000_000,
        }
    }
}

/// Outcome of one call to [`Dopri5::solve`].
#[derive(Debug, Clone, Copy)]
pub struct Solved<const N: usize> {
    pub t: f64,
    pub y: [Complex64; N],
    /// `false` when the observer requested an early stop.
    pub completed: bool,
    pub steps: usize,
}

fn axpy<const N: usize>(
    y: &[Complex64; N],
    h: f64,
    terms: &[(f64, &[Complex64; N])],
) -> [Complex64; N] {
    let mut out = *y;
    for (c, k) in terms {
        if *c != 0.0 {
            for i in 0..N {
                out[i] += k[i] * (h * c);
            }
        }
    }
    out
}

impl Dopri5 {
    pub fn with_tol(rtol: f64, atol: f64) -> Self {
        Self {
            rtol,
            atol,
            ..Self::default()
        }
    }

    /// Integrates `dy/dt = f(t, y)` from `t0` to `t1`. The observer receives
    /// `(t, y, err)` after each accepted step, `err` being the scaled local
    /// error estimate; returning `Ok(false)` stops the integration.
    pub fn solve<const N: usize, F, O>(
        &self,
        mut f: F,
        t0: f64,
        t1: f64,
        y0: [Complex64; N],
        mut observe: O,
    ) -> Result<Solved<N>>
    where
        F: FnMut(f64, &[Complex64; N]) -> Result<[Complex64; N]>,
        O: FnMut(f64, &[Complex64; N], f64) -> Result<bool>,
    {
        let span = t1 - t0;
        if span == 0.0 {
            return Ok(Solved {
                t: t0,
                y: y0,
                completed: true,
                steps: 0,
            });
        }
        let dir = span.signum();
        let h_min = self.min_step * span.abs();
        let mut h = self.first_step * span.abs();
        let mut t = t0;
        let mut y = y0;
        let mut k1 = f(t, &y)?;
        let mut steps = 0;
        let mut rejected_last = false;
        while (t1 - t) * dir > 0.0 {
            if steps >= self.max_steps {
                return Err(Error::NonConvergence(format!(
                    "step budget {} exhausted at t = {t}",
                    self.max_steps
                )));
            }
            let last = (t + dir * h - t1) * dir >= 0.0;
            let hs = if last { t1 - t } else { dir * h };
            let k2 = f(t + C2 * hs, &axpy(&y, hs, &[(A21, &k1)]))?;
            let k3 = f(t + C3 * hs, &axpy(&y, hs, &[(A31, &k1), (A32, &k2)]))?;
            let k4 = f(
                t + C4 * hs,
                &axpy(&y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
            )?;
            let k5 = f(
                t + C5 * hs,
                &axpy(&y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            )?;
            let k6 = f(
                t + hs,
                &axpy(
                    &y,
                    hs,
                    &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                ),
            )?;
            let y_new = axpy(
                &y,
                hs,
                &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
            );
            let k7 = f(t + hs, &y_new)?;
            let e = axpy(
                &[Complex64::new(0.0, 0.0); N],
                hs,
                &[
                    (E1, &k1),
                    (E3, &k3),
                    (E4, &k4),
                    (E5, &k5),
                    (E6, &k6),
                    (E7, &k7),
                ],
            );
            let mut acc = 0.0;
            for i in 0..N {
                let sc = self.atol + self.rtol * y[i].norm().max(y_new[i].norm());
                acc += (e[i].norm() / sc).powi(2);
            }
            let err = (acc / N as f64).sqrt();
            if !err.is_finite() {
                h *= MIN_FACTOR;
                rejected_last = true;
                if h < h_min {
                    return Err(Error::StepUnderflow(t));
                }
                continue;
            }
            let factor = if err == 0.0 {
                MAX_FACTOR
            } else {
                (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
            };
            if err <= 1.0 {
                t = if last { t1 } else { t + hs };
                y = y_new;
                k1 = k7;
                steps += 1;
                if !observe(t, &y, err)? {
                    return Ok(Solved {
                        t,
                        y,
                        completed: false,
                        steps,
                    });
                }
                h = hs.abs()
                    * if rejected_last {
                        factor.min(1.0)
                    } else {
                        factor
                    };
                rejected_last = false;
            } else {
                h = hs.abs() * factor;
                rejected_last = true;
                if h < h_min {
                    return Err(Error::StepUnderflow(t));
                }
            }
        }
        Ok(Solved {
            t,
            y,
            completed: true,
            steps,
        })
    }
}
