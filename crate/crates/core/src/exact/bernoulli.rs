//! Bernoulli numbers and the twisted Faulhaber coefficients.
//!
//! For a root of unity xi (or any scalar u) the coefficients p_m of the
//! polynomial P with u*P(x+1) - P(x) = x^l give
//! sum_{n1<n} u^{n1} n1^l = u^n P(n) - P(0). For u = 1 the polynomial is the
//! Faulhaber polynomial and P(0) = 0.

use super::cyclotomic::ExactScalar;
use super::rational::{binomial, floor_log, rat, val_rat, Rat};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

fn bernoulli_cache() -> &'static Mutex<Vec<Rat>> {
    static CACHE: OnceLock<Mutex<Vec<Rat>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![Rat::one()]))
}

/// B_k with B_1 = -1/2.
pub fn bernoulli(k: usize) -> Rat {
    let mut cache = bernoulli_cache().lock().unwrap();
    while cache.len() <= k {
        let n = cache.len();
        // sum_{j<=n} C(n+1, j) B_j = 0
        let mut s = Rat::zero();
        for (j, b) in cache.iter().enumerate() {
            s += Rat::from_integer(binomial(n as u64 + 1, j as u64)) * b;
        }
        let b = -s / rat(n as i64 + 1);
        cache.push(b);
    }
    cache[k].clone()
}

/// Coefficients p_0..p_{l+1} of P with u*P(x+1) - P(x) = x^l.
pub fn twisted_faulhaber<S: Scalar>(l: usize, u: &S) -> Vec<S> {
    let one = u.one_like();
    let mut p = vec![u.zero_like(); l + 2];
    if *u == one {
        for (m, slot) in p.iter_mut().enumerate().skip(1) {
            let c = Rat::from_integer(binomial(l as u64 + 1, m as u64)) * bernoulli(l + 1 - m)
                / rat(l as i64 + 1);
            *slot = u.from_rational_like(&c);
        }
        return p;
    }
    let inv = (u.clone() - one).inv().expect("u - 1 invertible for u != 1");
    p[l] = inv.clone();
    for k in (0..l).rev() {
        let mut s = u.zero_like();
        for i in k + 1..=l {
            s = s + p[i].clone() * u.from_rational_like(&Rat::from_integer(binomial(i as u64, k as u64)));
        }
        p[k] = -(u.clone() * s * inv.clone());
    }
    p
}

/// Evaluates a coefficient vector at an integer point.
pub fn eval_poly<S: Scalar>(coeffs: &[S], x: i64) -> S {
    let mut acc = coeffs[0].zero_like();
    for c in coeffs.iter().rev() {
        acc = acc * c.from_int_like(x) + c.clone();
    }
    acc
}

/// sum_{n1 = lo}^{hi-1} u^{n1} n1^l in closed form.
pub fn faulhaber_twisted<S: Scalar>(l: usize, u: &S, lo: i64, hi: i64) -> S {
    let p = twisted_faulhaber(l, u);
    let at = |n: i64| u.pow_signed(n) * eval_poly(&p, n);
    at(hi) - at(lo)
}

type Key = (u32, usize, usize, i64);

/// Cached table of the coefficients 𝓑^l_m(xi) and of Bernoulli numbers.
#[derive(Debug, Default)]
pub struct BCoefTable {
    entries: Mutex<HashMap<Key, ExactScalar>>,
}

impl BCoefTable {
    pub fn global() -> &'static BCoefTable {
        static TABLE: OnceLock<BCoefTable> = OnceLock::new();
        TABLE.get_or_init(BCoefTable::default)
    }

    /// 𝓑^l_m(zeta_N^k), verified against the summation identity before caching.
    pub fn get(&self, n_roots: u32, l: usize, m: usize, k: i64) -> Result<ExactScalar> {
        if m > l + 1 {
            return Err(Error::Precondition(format!("bcoef index m = {m} exceeds l + 1 = {}", l + 1)));
        }
        let k = k.rem_euclid(n_roots as i64);
        if let Some(v) = self.entries.lock().unwrap().get(&(n_roots, l, m, k)) {
            return Ok(v.clone());
        }
        let xi = ExactScalar::zeta_pow(n_roots, k);
        let p = twisted_faulhaber(l, &xi);
        verify_identity(l, &xi, &p)?;
        let mut guard = self.entries.lock().unwrap();
        for (mm, c) in p.iter().enumerate() {
            guard.entry((n_roots, l, mm, k)).or_insert_with(|| c.clone());
        }
        Ok(p[m].clone())
    }

    /// Checks v_p(𝓑^l_m) >= -1 - log_p(l+1) on every cached rational entry.
    pub fn check_valuations(&self, p: u64) -> bool {
        self.entries.lock().unwrap().iter().all(|(&(_, l, _, _), v)| match v.valuation(p) {
            None => true,
            Some(val) => val >= -1 - floor_log(p, l as u64 + 1),
        })
    }

    pub fn len(&self) -> usize {
        self.entries.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn verify_identity(l: usize, xi: &ExactScalar, p: &[ExactScalar]) -> Result<()> {
    let mut direct = xi.zero_like();
    for n in 1..=(l as i64 + 3) {
        let n1 = n - 1;
        direct = direct + xi.pow(n1 as u64) * xi.from_rational_like(&Rat::from_integer(BigInt::from(n1).pow(l as u32)));
        let closed = xi.pow(n as u64) * eval_poly(p, n) - eval_poly(p, 0);
        if closed != direct {
            return Err(Error::Inconsistent(format!("twisted Faulhaber identity fails at l = {l}, n = {n}")));
        }
    }
    Ok(())
}

/// 𝓑^l_m(zeta_N^k) from the global table.
pub fn bcoef(n_roots: u32, l: usize, m: usize, k: i64) -> Result<ExactScalar> {
    BCoefTable::global().get(n_roots, l, m, k)
}

/// Rational 𝓑^l_m for xi = 1.
pub fn bcoef_rational(l: usize, m: usize) -> Rat {
    if m == 0 || m > l + 1 {
        return Rat::zero();
    }
    Rat::from_integer(binomial(l as u64 + 1, m as u64)) * bernoulli(l + 1 - m) / rat(l as i64 + 1)
}

/// von Staudt-Clausen check: v_p(B_2k) >= -1 for 2k <= kmax.
pub fn von_staudt_clausen_holds(kmax: usize, p: u64) -> bool {
    (0..=kmax).step_by(2).all(|k| val_rat(&bernoulli(k), p).is_none_or(|v| v >= -1))
}
