//! Monodromy triples `(x₀, x₁, x∞)`: admissibility, the two-sign-change
//! equivalence, braid actions and an explicit realization by 2×2 matrices.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::mat2::Mat2;

/// Entries below this modulus count as zero for admissibility.
pub const ZERO_TOL: f64 = 1e-12;
/// Entries below this modulus (relative to the largest entry) are ignored
/// when choosing the canonical signs.
pub const SIGN_ZERO_TOL: f64 = 1e-6;
/// Real parts within this relative band are treated as zero by the sign rule.
const HALF_PLANE_TOL: f64 = 1e-9;

/// The triple `(x₀, x₁, x∞)`, defined up to changing the sign of two entries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[Complex64; 3]", into = "[Complex64; 3]")]
pub struct MonodromyTriple {
    pub x0: Complex64,
    pub x1: Complex64,
    pub xinf: Complex64,
}

impl From<[Complex64; 3]> for MonodromyTriple {
    fn from(v: [Complex64; 3]) -> Self {
        MonodromyTriple::new(v[0], v[1], v[2])
    }
}

impl From<MonodromyTriple> for [Complex64; 3] {
    fn from(t: MonodromyTriple) -> Self {
        t.to_array()
    }
}

impl MonodromyTriple {
    pub fn new(x0: Complex64, x1: Complex64, xinf: Complex64) -> Self {
        Self { x0, x1, xinf }
    }

    pub fn real(x0: f64, x1: f64, xinf: f64) -> Self {
        Self::new(x0.into(), x1.into(), xinf.into())
    }

    pub fn to_array(&self) -> [Complex64; 3] {
        [self.x0, self.x1, self.xinf]
    }

    /// The three representatives obtained by changing two signs, plus `self`.
    pub fn sign_class(&self) -> [MonodromyTriple; 4] {
        let Self { x0, x1, xinf } = *self;
        [
            Self::new(x0, x1, xinf),
            Self::new(-x0, -x1, xinf),
            Self::new(-x0, x1, -xinf),
            Self::new(x0, -x1, -xinf),
        ]
    }

    /// Largest entrywise distance after the best two-sign change.
    pub fn class_distance(&self, other: &MonodromyTriple) -> f64 {
        self.sign_class()
            .iter()
            .map(|t| t.max_diff(other))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_diff(&self, other: &MonodromyTriple) -> f64 {
        (self.x0 - other.x0)
            .norm()
            .max((self.x1 - other.x1).norm())
            .max((self.xinf - other.xinf).norm())
    }

    pub fn max_abs(&self) -> f64 {
        self.x0.norm().max(self.x1.norm()).max(self.xinf.norm())
    }
}

/// The parameter `μ` of the equation. `μ = 0` is excluded since it yields
/// the same equation as `μ = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mu {
    pub value: Complex64,
    pub resonant: bool,
}

impl Mu {
    pub fn new(value: Complex64) -> Result<Self> {
        if value.norm() == 0.0 || !value.re.is_finite() || !value.im.is_finite() {
            return Err(Error::InvalidInput("mu must be finite and nonzero".into()));
        }
        let two = 2.0 * value;
        let resonant = two.im.abs() < 1e-12 && (two.re - two.re.round()).abs() < 1e-12;
        Ok(Self { value, resonant })
    }

    pub fn real(value: f64) -> Result<Self> {
        Self::new(Complex64::new(value, 0.0))
    }

    /// `4 sin²(πμ)`, the right-hand side of the cubic relation.
    pub fn relation_rhs(&self) -> Complex64 {
        let s = (PI * self.value).sin();
        4.0 * s * s
    }

    /// `α = (2μ − 1)²/2`.
    pub fn alpha(&self) -> Complex64 {
        let t = 2.0 * self.value - 1.0;
        0.5 * t * t
    }
}

/// Monodromy matrices of the loops around `0`, `x`, `1` and `∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonodromyMatrixSet {
    pub m0: Mat2,
    pub mx: Mat2,
    pub m1: Mat2,
    pub minf: Mat2,
}

impl MonodromyMatrixSet {
    /// Builds the set with `M∞ = (M₁ Mₓ M₀)⁻¹`, so that `M∞ M₁ Mₓ M₀ = I`.
    pub fn from_finite(m0: Mat2, mx: Mat2, m1: Mat2) -> Self {
        let minf = (m1 * mx * m0).inverse();
        Self { m0, mx, m1, minf }
    }

    pub fn identity() -> Self {
        let i = Mat2::identity();
        Self {
            m0: i,
            mx: i,
            m1: i,
            minf: i,
        }
    }
}

/// `|x₀² + x₁² + x∞² − x₀x₁x∞ − 4 sin²(πμ)|`.
pub fn relation_residual(t: &MonodromyTriple, mu: &Mu) -> f64 {
    let MonodromyTriple { x0, x1, xinf } = *t;
    (x0 * x0 + x1 * x1 + xinf * xinf - x0 * x1 * xinf - mu.relation_rhs()).norm()
}

fn is_zero(z: Complex64) -> bool {
    z.norm() < ZERO_TOL
}

fn excluded_set() -> [MonodromyTriple; 4] {
    [
        MonodromyTriple::real(2.0, 2.0, 2.0),
        MonodromyTriple::real(-2.0, -2.0, 2.0),
        MonodromyTriple::real(2.0, -2.0, -2.0),
        MonodromyTriple::real(-2.0, 2.0, -2.0),
    ]
}

/// At most one zero entry and not one of the four excluded `±2` triples.
pub fn is_admissible(t: &MonodromyTriple) -> bool {
    let zeros = t.to_array().iter().filter(|z| is_zero(**z)).count();
    if zeros > 1 {
        return false;
    }
    !excluded_set().iter().any(|e| e.max_diff(t) < ZERO_TOL)
}

/// Whether `z` lies in the half plane `arg z ∈ (−π/2, π/2]`.
fn in_right_half(z: Complex64) -> bool {
    let band = HALF_PLANE_TOL * z.norm();
    if z.re > band {
        true
    } else if z.re < -band {
        false
    } else {
        z.im > 0.0
    }
}

/// Deterministic representative of the two-sign-change class.
///
/// Among the four forms, keep those whose first nonzero entry has argument in
/// `(−π/2, π/2]`, then break the remaining tie with the second nonzero entry.
/// Entries much smaller than the largest one are skipped, so numerical noise
/// on a vanishing entry cannot flip the outcome.
pub fn canonicalize(t: &MonodromyTriple) -> Result<MonodromyTriple> {
    if !is_admissible(t) {
        return Err(Error::InadmissibleTriple(format!("{:?}", t.to_array())));
    }
    let scale = t.max_abs().max(1.0);
    let mut significant: Vec<usize> = (0..3)
        .filter(|&i| t.to_array()[i].norm() > SIGN_ZERO_TOL * scale)
        .collect();
    if significant.len() < 2 {
        significant = (0..3).filter(|&i| !is_zero(t.to_array()[i])).collect();
    }
    let mut forms: Vec<MonodromyTriple> = t.sign_class().to_vec();
    for &i in significant.iter().take(2) {
        forms.retain(|f| in_right_half(f.to_array()[i]));
    }
    forms
        .first()
        .copied()
        .ok_or_else(|| Error::InadmissibleTriple("no canonical representative".into()))
}

/// `β₁: (x₀, x₁, x∞) ↦ (−x₀, x∞ − x₀x₁, x₁)`.
pub fn braid_beta1(t: &MonodromyTriple) -> MonodromyTriple {
    MonodromyTriple::new(-t.x0, t.xinf - t.x0 * t.x1, t.x1)
}

/// `β₂: (x₀, x₁, x∞) ↦ (x∞, −x₁, x₀ − x₁x∞)`.
pub fn braid_beta2(t: &MonodromyTriple) -> MonodromyTriple {
    MonodromyTriple::new(t.xinf, -t.x1, t.x0 - t.x1 * t.xinf)
}

/// `β₁²: (x₀, x₁, x∞) ↦ (x₀, x₁ + x₀x∞ − x₁x₀², x∞ − x₀x₁)`.
pub fn braid_beta1_sq(t: &MonodromyTriple) -> MonodromyTriple {
    let MonodromyTriple { x0, x1, xinf } = *t;
    MonodromyTriple::new(x0, x1 + x0 * xinf - x1 * x0 * x0, xinf - x0 * x1)
}

/// Inverse of [`braid_beta1_sq`]; the action is affine in `(x₁, x∞)` with
/// unit determinant.
pub fn braid_beta1_sq_inv(t: &MonodromyTriple) -> MonodromyTriple {
    let MonodromyTriple { x0, x1, xinf } = *t;
    MonodromyTriple::new(x0, x1 - x0 * xinf, x0 * x1 + (1.0 - x0 * x0) * xinf)
}

/// `β₂²: (x₀, x₁, x∞) ↦ (x₀ − x₁x∞, x₁, x∞ + x₀x₁ − x∞x₁²)`.
pub fn braid_beta2_sq(t: &MonodromyTriple) -> MonodromyTriple {
    let MonodromyTriple { x0, x1, xinf } = *t;
    MonodromyTriple::new(x0 - x1 * xinf, x1, xinf + x0 * x1 - xinf * x1 * x1)
}

/// Inverse of [`braid_beta2_sq`].
pub fn braid_beta2_sq_inv(t: &MonodromyTriple) -> MonodromyTriple {
    let MonodromyTriple { x0, x1, xinf } = *t;
    MonodromyTriple::new((1.0 - x1 * x1) * x0 + x1 * xinf, x1, xinf - x1 * x0)
}

/// Unipotent triple `(N₁, N₂, N₃)` with `tr N₁N₂ = 2 − y₁²`,
/// `tr N₂N₃ = 2 − y₂²`, `tr N₁N₃ = 2 − y₃²`; requires `y₁ ≠ 0`.
///
/// ```text
/// N₁ = [[1, −y₁], [0, 1]]
/// N₂ = [[1, 0], [y₁, 1]]
/// N₃ = [[1 + y₂y₃/y₁, −y₂²/y₁], [y₃²/y₁, 1 − y₂y₃/y₁]]
/// ```
fn anchored(y1: Complex64, y2: Complex64, y3: Complex64) -> [Mat2; 3] {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let p = y2 * y3 / y1;
    [
        Mat2::new(one, -y1, zero, one),
        Mat2::new(one, zero, y1, one),
        Mat2::new(one + p, -y2 * y2 / y1, y3 * y3 / y1, one - p),
    ]
}

/// Explicit monodromy matrices realizing a triple through its pair traces
/// `tr M₀Mₓ = 2 − x₀²`, `tr MₓM₁ = 2 − x₁²`, `tr M₀M₁ = 2 − x∞²`.
///
/// With `x₀ ≠ 0` the anchored form is used directly, `(M₀, Mₓ, M₁) = (N₁, N₂, N₃)`
/// for `(y₁, y₂, y₃) = (x₀, x₁, x∞)`. If `x₀ = 0` the labels are rotated: with
/// `(y₁, y₂, y₃) = (x₁, x∞, x₀)` take `(M₀, Mₓ, M₁) = (N₃, N₁, N₂)`, and if also
/// `x₁ = 0`, with `(y₁, y₂, y₃) = (x∞, x₀, x₁)` take `(M₀, Mₓ, M₁) = (N₂, N₃, N₁)`.
/// Each rotation only cycles the product `M₁MₓM₀`, so its trace is unchanged.
pub fn matrix_realization(t: &MonodromyTriple) -> Result<MonodromyMatrixSet> {
    let MonodromyTriple { x0, x1, xinf } = *t;
    if !is_zero(x0) {
        let [n1, n2, n3] = anchored(x0, x1, xinf);
        Ok(MonodromyMatrixSet::from_finite(n1, n2, n3))
    } else if !is_zero(x1) {
        let [n1, n2, n3] = anchored(x1, xinf, x0);
        Ok(MonodromyMatrixSet::from_finite(n3, n1, n2))
    } else if !is_zero(xinf) {
        let [n1, n2, n3] = anchored(xinf, x0, x1);
        Ok(MonodromyMatrixSet::from_finite(n2, n3, n1))
    } else {
        Err(Error::InadmissibleTriple("all entries are zero".into()))
    }
}

/// Reads the triple back from pair traces.
///
/// Each entry is the principal square root of `2 − tr(·)`. Pair traces fix the
/// entries only up to individual signs; the sign of the product `x₀x₁x∞` is then
/// fixed from `tr M∞ = 2 − 4 sin²(πμ)` through the cubic relation, flipping the
/// largest entry when needed.
pub fn trace_check(ms: &MonodromyMatrixSet) -> MonodromyTriple {
    let two = Complex64::new(2.0, 0.0);
    let x0 = (two - (ms.m0 * ms.mx).trace()).sqrt();
    let x1 = (two - (ms.mx * ms.m1).trace()).sqrt();
    let xinf = (two - (ms.m0 * ms.m1).trace()).sqrt();
    let mut t = MonodromyTriple::new(x0, x1, xinf);
    let rhs = two - ms.minf.trace();
    let target = x0 * x0 + x1 * x1 + xinf * xinf - rhs;
    let prod = x0 * x1 * xinf;
    if (prod + target).norm() < (prod - target).norm() {
        let big = (0..3)
            .max_by(|&a, &b| {
                t.to_array()[a]
                    .norm()
                    .partial_cmp(&t.to_array()[b].norm())
                    .unwrap()
            })
            .unwrap();
        match big {
            0 => t.x0 = -t.x0,
            1 => t.x1 = -t.x1,
            _ => t.xinf = -t.xinf,
        }
    }
    t
}
