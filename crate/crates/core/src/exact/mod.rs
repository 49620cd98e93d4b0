//! Exact rational, cyclotomic and p-adic arithmetic.

pub mod bernoulli;
pub mod cyclotomic;
pub mod modpoly;
pub mod padic;
pub mod rational;

pub use bernoulli::{bcoef, bernoulli, BCoefTable};
pub use cyclotomic::{CycloField, ExactScalar};
pub use padic::{PadicField, PadicScalar};
pub use rational::Rat;
