//! Exact and p-adic computation of multiple harmonic sums, Ihara-type actions on
//! non-commutative series, and p-adic multiple zeta values obtained as fixed points.

pub mod error;
pub mod exact;
pub mod harmonic_integral;
pub mod linalg;
pub mod mhs;
pub mod ihara;
pub mod ncseries;
pub mod scalar;
pub mod summation;
pub mod zeta;

pub use error::{Error, Result};
pub use exact::{ExactScalar, PadicField, PadicScalar, Rat};
pub use scalar::{Scalar, ScalarKind};
