//! Polynomials over Z/p^k, little-endian coefficient vectors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

pub type Poly = Vec<BigInt>;

pub fn reduce(a: &[BigInt], m: &BigInt) -> Poly {
    let mut v: Poly = a.iter().map(|c| c.mod_floor(m)).collect();
    trim(&mut v);
    v
}

pub fn trim(a: &mut Poly) {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
}

pub fn mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    reduce(&out, m)
}

pub fn sub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Poly {
    let n = a.len().max(b.len());
    let out: Poly = (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default())
        .collect();
    reduce(&out, m)
}

pub fn add(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Poly {
    let n = a.len().max(b.len());
    let out: Poly = (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default())
        .collect();
    reduce(&out, m)
}

/// Inverse of a modulo the prime p.
pub fn inv_mod_prime(a: &BigInt, p: &BigInt) -> BigInt {
    a.mod_floor(p).modpow(&(p - 2u32), p)
}

/// Division with remainder by a polynomial whose leading coefficient is a unit mod m.
pub fn divrem(a: &[BigInt], b: &[BigInt], m: &BigInt, p: &BigInt) -> (Poly, Poly) {
    let mut r = reduce(a, m);
    let b = reduce(b, m);
    assert!(!b.is_empty(), "division by zero polynomial");
    let db = b.len() - 1;
    let lead_inv = inv_unit(&b[db], m, p);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    for i in (0..q.len()).rev() {
        let c = (&r[i + db] * &lead_inv).mod_floor(m);
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r[i + j] = (&r[i + j] - &c * bj).mod_floor(m);
        }
        q[i] = c;
    }
    trim(&mut q);
    trim(&mut r);
    (q, r)
}

/// Inverse of a unit modulo p^k by Newton lifting from mod p.
pub fn inv_unit(a: &BigInt, m: &BigInt, p: &BigInt) -> BigInt {
    let mut x = inv_mod_prime(a, p);
    let mut pk = p.clone();
    while &pk < m {
        pk = (&pk * &pk).min(m.clone());
        let two = BigInt::from(2);
        x = (&x * (two - a * &x)).mod_floor(&pk);
    }
    x.mod_floor(m)
}

/// Extended Euclid over F_p: returns (g, s, t) with s*a + t*b = g, g monic.
pub fn xgcd_fp(a: &[BigInt], b: &[BigInt], p: &BigInt) -> (Poly, Poly, Poly) {
    let (mut r0, mut r1) = (reduce(a, p), reduce(b, p));
    let (mut s0, mut s1): (Poly, Poly) = (vec![BigInt::one()], Vec::new());
    let (mut t0, mut t1): (Poly, Poly) = (Vec::new(), vec![BigInt::one()]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p, p);
        let s2 = sub(&s0, &mul(&q, &s1, p), p);
        let t2 = sub(&t0, &mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if let Some(lead) = r0.last().cloned() {
        let li = vec![inv_mod_prime(&lead, p)];
        r0 = mul(&r0, &li, p);
        s0 = mul(&s0, &li, p);
        t0 = mul(&t0, &li, p);
    }
    (r0, s0, t0)
}

/// Calls `f` on every monic polynomial of degree `deg` over F_p until it returns true.
pub fn find_monic(p: u64, deg: usize, cap: u64, mut f: impl FnMut(&Poly) -> bool) -> Option<Poly> {
    let total = p.checked_pow(deg as u32)?;
    if total > cap {
        return None;
    }
    for idx in 0..total {
        let mut cand = Vec::with_capacity(deg + 1);
        let mut t = idx;
        for _ in 0..deg {
            cand.push(BigInt::from(t % p));
            t /= p;
        }
        cand.push(BigInt::one());
        if f(&cand) {
            return Some(cand);
        }
    }
    None
}
