//! Helpers on big rationals and binomials.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat2(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses "a/b" or "a".
pub fn parse_rational(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().map_err(|_| bad())?;
            let b: BigInt = b.trim().parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(a, b))
        }
        None => Ok(Rat::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn fmt_rational(q: &Rat) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// p-adic valuation of a nonzero integer.
pub fn val_int(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// p-adic valuation of a rational; `None` for zero.
pub fn val_rat(q: &Rat, p: u64) -> Option<i64> {
    if q.is_zero() {
        None
    } else {
        Some(val_int(q.numer(), p) - val_int(q.denom(), p))
    }
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// C(-n, l) = (-1)^l C(n+l-1, l).
pub fn binomial_neg(n: u64, l: u64) -> BigInt {
    let b = if n == 0 {
        if l == 0 { BigInt::one() } else { BigInt::zero() }
    } else {
        binomial(n + l - 1, l)
    };
    if l % 2 == 1 { -b } else { b }
}

pub fn pow_rat(q: &Rat, e: i64) -> Rat {
    if e >= 0 {
        num_traits::pow(q.clone(), e as usize)
    } else {
        num_traits::pow(q.recip(), (-e) as usize)
    }
}

/// floor(log_p(x)) for x >= 1.
pub fn floor_log(p: u64, x: u64) -> i64 {
    let mut k = 0;
    let mut acc = p;
    while acc <= x {
        acc = acc.saturating_mul(p);
        k += 1;
    }
    k
}
