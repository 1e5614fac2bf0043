//! Error type shared by every module of the crate.

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Failures raised by the numerical routines.
///
/// Variants split into two families: validation errors (the input violates a
/// documented precondition) and numerical errors (a computation on valid input
/// failed to converge or hit a singularity). [`Error::is_validation`] tells
/// them apart.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Gamma/digamma pole at nonpositive integer {0}")]
    GammaPole(f64),
    #[error("series argument |x| = {modulus} outside the radius guard {radius}")]
    OutOfRadius { modulus: f64, radius: f64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("series did not converge: {0}")]
    NonConvergence(String),
    #[error("inadmissible monodromy triple: {0}")]
    InadmissibleTriple(String),
    #[error("excluded value: {0}")]
    ExcludedValue(String),
    #[error("sigma = {sigma} sits on a pole of the generic formula; use case {case}")]
    PoleCase { sigma: String, case: &'static str },
    #[error("degenerate data: {0}")]
    Degenerate(String),
    #[error("exponent {0} lies on a forbidden real ray")]
    ForbiddenRay(String),
    #[error("unsupported braid: {0}")]
    UnsupportedBraid(String),
    #[error("Picard iteration failed to contract after {iterations} iterations (ratio {ratio:.3e}); shrink r")]
    NonContraction { iterations: usize, ratio: f64 },
    #[error("singular configuration: {0}")]
    Singular(String),
    #[error("step size underflow at parameter {0}")]
    StepUnderflow(f64),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("oscillatory window: {0}")]
    OscillatoryWindow(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// True for errors caused by inputs outside the documented domain.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::GammaPole(_)
                | Error::OutOfRadius { .. }
                | Error::Precondition(_)
                | Error::InadmissibleTriple(_)
                | Error::ExcludedValue(_)
                | Error::PoleCase { .. }
                | Error::Degenerate(_)
                | Error::ForbiddenRay(_)
                | Error::UnsupportedBraid(_)
                | Error::InvalidInput(_)
        )
    }
}
