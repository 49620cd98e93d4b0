//! The scalar abstraction shared by exact and p-adic series.
//!
//! Field elements here carry their field (cyclotomic degree, or prime and
//! precision cap), so constructors take a template value instead of being
//! free functions like `num_traits::Zero::zero`.

use crate::error::Result;
use crate::exact::rational::Rat;
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarKind {
    Exact,
    Padic,
}

impl ScalarKind {
    pub fn name(self) -> &'static str {
        match self {
            ScalarKind::Exact => "exact",
            ScalarKind::Padic => "padic",
        }
    }
}

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    const KIND: ScalarKind;

    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_rational_like(&self, q: &Rat) -> Self;
    /// The root of unity zeta^k of the ambient field.
    fn root_like(&self, k: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Option<Self>;
    /// p-adic valuation; `None` for zero. Exact scalars use the minimum over
    /// power-basis coordinates, which is the true valuation when p is unramified.
    fn valuation(&self, p: u64) -> Option<i64>;
    fn to_json(&self) -> serde_json::Value;
    fn from_json_like(&self, v: &serde_json::Value) -> Result<Self>;

    fn from_int_like(&self, n: i64) -> Self {
        self.from_rational_like(&crate::exact::rational::rat(n))
    }

    fn pow(&self, e: u64) -> Self {
        let mut acc = self.one_like();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }

    /// Integer power; negative exponents go through `inv`.
    fn pow_signed(&self, e: i64) -> Self {
        if e >= 0 {
            self.pow(e as u64)
        } else {
            self.inv().expect("negative power of a non-invertible scalar").pow((-e) as u64)
        }
    }
}
