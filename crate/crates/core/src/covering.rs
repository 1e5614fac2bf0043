//! Points of the universal covering of the punctured plane.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// A point of the universal covering of `C \ {0}`, stored as `(|x|, arg x)`.
///
/// The argument is never reduced modulo `2π`; every logarithm and complex
/// power in the crate reads its branch from here.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoveringPoint {
    pub modulus: f64,
    pub argument: f64,
}

impl CoveringPoint {
    /// Builds a point, rejecting non-positive or non-finite moduli.
    pub fn try_new(modulus: f64, argument: f64) -> Result<Self> {
        if !(modulus > 0.0) || !modulus.is_finite() || !argument.is_finite() {
            return Err(Error::InvalidInput(format!(
                "covering point needs modulus > 0 and finite argument, got ({modulus}, {argument})"
            )));
        }
        Ok(Self { modulus, argument })
    }

    /// Builds a point; panics on a non-positive modulus.
    pub fn new(modulus: f64, argument: f64) -> Self {
        Self::try_new(modulus, argument).expect("invalid covering point")
    }

    /// Point on the principal sheet (`arg` in `(-π, π]`).
    pub fn from_principal(z: Complex64) -> Result<Self> {
        Self::try_new(z.norm(), z.arg())
    }

    /// Positive real point `r` with argument 0.
    pub fn real(r: f64) -> Self {
        Self::new(r, 0.0)
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::from_polar(self.modulus, self.argument)
    }

    /// `ln x = ln|x| + i arg x` on this sheet.
    pub fn ln(&self) -> Complex64 {
        Complex64::new(self.modulus.ln(), self.argument)
    }

    /// `x^c = exp(c ln x)` on this sheet.
    pub fn powc(&self, c: Complex64) -> Complex64 {
        (c * self.ln()).exp()
    }

    /// `|x^c| = |x|^{Re c} e^{-Im c arg x}` without forming the power.
    pub fn abs_pow(&self, c: Complex64) -> f64 {
        (c.re * self.modulus.ln() - c.im * self.argument).exp()
    }

    /// Continues `x + dz` from this point; requires `|dz| < |x|`.
    pub fn offset(&self, dz: Complex64) -> Self {
        let ratio = Complex64::new(1.0, 0.0) + dz / self.to_complex();
        Self::new(self.modulus * ratio.norm(), self.argument + ratio.arg())
    }

    /// Multiplies by a complex number `c = |c| e^{iφ}` with `φ` principal.
    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(self.modulus * c.norm(), self.argument + c.arg())
    }

    /// `1/x` with `arg(1/x) = -arg x`.
    pub fn recip(&self) -> Self {
        Self::new(1.0 / self.modulus, -self.argument)
    }

    /// Number of full turns around the origin, rounded to the nearest sheet.
    pub fn sheet(&self) -> i64 {
        (self.argument / (2.0 * PI)).round() as i64
    }
}
