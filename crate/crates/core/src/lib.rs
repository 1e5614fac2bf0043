//! Critical behaviour of Painleve VI transcendents.

// `!(a < b)` guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotic;
pub mod connection;
pub mod covering;
pub mod elliptic;
pub mod error;
pub mod fuchsian;
pub mod integrator;
pub mod lsq;
pub mod mat2;
pub mod monodromy;
pub mod ode;
pub mod special;

pub use covering::CoveringPoint;
pub use error::{Error, Result};
pub use mat2::Mat2;
pub use monodromy::{MonodromyMatrixSet, MonodromyTriple, Mu};
