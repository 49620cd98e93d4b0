//! Exact arithmetic in Q(zeta_N), power basis modulo the N-th cyclotomic polynomial.

use super::rational::{fmt_rational, parse_rational, rat, val_rat, Rat};
use crate::error::{Error, Result};
use crate::scalar::{Scalar, ScalarKind};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

/// Integer polynomial, little-endian.
fn poly_divexact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd].clone();
    let mut q = vec![BigInt::zero(); r.len() - dd];
    for i in (0..q.len()).rev() {
        let c = &r[i + dd] / &lead;
        for (j, dj) in den.iter().enumerate() {
            r[i + j] -= &c * dj;
        }
        q[i] = c;
    }
    debug_assert!(r.iter().all(|c| c.is_zero()));
    q
}

/// The N-th cyclotomic polynomial.
pub fn cyclotomic_poly(n: u32) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); n as usize + 1];
    p[0] = -BigInt::one();
    p[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = poly_divexact(&p, &cyclotomic_poly(d));
        }
    }
    p
}

pub fn euler_phi(n: u32) -> usize {
    (1..=n).filter(|k| num_integer::gcd(*k, n) == 1).count()
}

#[derive(Debug)]
pub struct CycloField {
    pub n: u32,
    pub phi: usize,
    pub modulus: Vec<BigInt>,
    /// x^k reduced, for k < max(N, 2*phi).
    powers: Vec<Vec<BigInt>>,
}

impl CycloField {
    fn build(n: u32) -> CycloField {
        let modulus = cyclotomic_poly(n);
        let phi = modulus.len() - 1;
        let count = (n as usize).max(2 * phi).max(1);
        let mut powers = Vec::with_capacity(count);
        let mut cur = vec![BigInt::zero(); phi];
        cur[0] = BigInt::one();
        for _ in 0..count {
            powers.push(cur.clone());
            // multiply by x and reduce (modulus is monic)
            let top = cur[phi - 1].clone();
            for i in (1..phi).rev() {
                cur[i] = cur[i - 1].clone();
            }
            cur[0] = BigInt::zero();
            if !top.is_zero() {
                for i in 0..phi {
                    cur[i] -= &top * &modulus[i];
                }
            }
        }
        CycloField { n, phi, modulus, powers }
    }

    /// Shared field instance for Q(zeta_n).
    pub fn get(n: u32) -> Arc<CycloField> {
        assert!(n >= 1, "N must be positive");
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CycloField>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap();
        guard.entry(n).or_insert_with(|| Arc::new(CycloField::build(n))).clone()
    }

    fn power(&self, k: usize) -> &[BigInt] {
        &self.powers[k]
    }
}

/// An element of Q(zeta_N).
#[derive(Clone)]
pub struct ExactScalar {
    pub field: Arc<CycloField>,
    pub coords: Vec<Rat>,
}

impl PartialEq for ExactScalar {
    fn eq(&self, o: &Self) -> bool {
        self.field.n == o.field.n && self.coords == o.coords
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.n == 1 {
            write!(f, "{}", fmt_rational(&self.coords[0]))
        } else {
            let parts: Vec<String> = self.coords.iter().map(fmt_rational).collect();
            write!(f, "[{}]", parts.join(", "))
        }
    }
}

impl ExactScalar {
    pub fn from_rational(n: u32, q: Rat) -> Self {
        let field = CycloField::get(n);
        let mut coords = vec![Rat::zero(); field.phi];
        coords[0] = q;
        ExactScalar { field, coords }
    }

    pub fn rational(q: Rat) -> Self {
        Self::from_rational(1, q)
    }

    pub fn int(n: u32, k: i64) -> Self {
        Self::from_rational(n, rat(k))
    }

    /// zeta^k in Q(zeta_n).
    pub fn zeta_pow(n: u32, k: i64) -> Self {
        let field = CycloField::get(n);
        let k = k.rem_euclid(n as i64) as usize;
        let coords = field.power(k).iter().map(|c| Rat::from_integer(c.clone())).collect();
        ExactScalar { field, coords }
    }

    pub fn n(&self) -> u32 {
        self.field.n
    }

    /// The rational value when the element lies in Q.
    pub fn as_rational(&self) -> Option<&Rat> {
        if self.coords[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    pub fn scale(&self, q: &Rat) -> Self {
        ExactScalar { field: self.field.clone(), coords: self.coords.iter().map(|c| c * q).collect() }
    }

    fn check(&self, o: &Self) {
        assert_eq!(self.field.n, o.field.n, "mixing elements of different cyclotomic fields");
    }

    /// Inverse via the linear map of multiplication (exact Gaussian elimination).
    fn invert(&self) -> Option<Self> {
        if self.coords.iter().all(|c| c.is_zero()) {
            return None;
        }
        let phi = self.field.phi;
        if phi == 1 {
            return Some(ExactScalar { field: self.field.clone(), coords: vec![self.coords[0].recip()] });
        }
        // columns: self * x^j
        let mut m: Vec<Vec<Rat>> = vec![vec![Rat::zero(); phi + 1]; phi];
        for j in 0..phi {
            let col = self.clone() * ExactScalar::zeta_pow(self.field.n, j as i64);
            for i in 0..phi {
                m[i][j] = col.coords[i].clone();
            }
        }
        m[0][phi] = Rat::one();
        let sol = crate::linalg::solve_square(m)?;
        Some(ExactScalar { field: self.field.clone(), coords: sol })
    }
}

impl Add for ExactScalar {
    type Output = ExactScalar;
    fn add(self, o: Self) -> Self {
        self.check(&o);
        let coords = self.coords.into_iter().zip(o.coords).map(|(a, b)| a + b).collect();
        ExactScalar { field: self.field, coords }
    }
}

impl Sub for ExactScalar {
    type Output = ExactScalar;
    fn sub(self, o: Self) -> Self {
        self.check(&o);
        let coords = self.coords.into_iter().zip(o.coords).map(|(a, b)| a - b).collect();
        ExactScalar { field: self.field, coords }
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> Self {
        ExactScalar { field: self.field, coords: self.coords.into_iter().map(|a| -a).collect() }
    }
}

impl Mul for ExactScalar {
    type Output = ExactScalar;
    fn mul(self, o: Self) -> Self {
        self.check(&o);
        let phi = self.field.phi;
        if phi == 1 {
            return ExactScalar { field: self.field, coords: vec![&self.coords[0] * &o.coords[0]] };
        }
        let mut prod = vec![Rat::zero(); 2 * phi - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coords.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let mut coords = vec![Rat::zero(); phi];
        for (k, c) in prod.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, t) in self.field.power(k).iter().enumerate() {
                if !t.is_zero() {
                    coords[i] += &c * Rat::from_integer(t.clone());
                }
            }
        }
        ExactScalar { field: self.field, coords }
    }
}

impl Scalar for ExactScalar {
    const KIND: ScalarKind = ScalarKind::Exact;

    fn zero_like(&self) -> Self {
        ExactScalar { field: self.field.clone(), coords: vec![Rat::zero(); self.field.phi] }
    }
    fn one_like(&self) -> Self {
        self.from_rational_like(&Rat::one())
    }
    fn from_rational_like(&self, q: &Rat) -> Self {
        let mut coords = vec![Rat::zero(); self.field.phi];
        coords[0] = q.clone();
        ExactScalar { field: self.field.clone(), coords }
    }
    fn root_like(&self, k: i64) -> Self {
        ExactScalar::zeta_pow(self.field.n, k)
    }
    fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
    fn inv(&self) -> Option<Self> {
        self.invert()
    }
    fn valuation(&self, p: u64) -> Option<i64> {
        self.coords.iter().filter_map(|c| val_rat(c, p)).min()
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "coords": self.coords.iter().map(fmt_rational).collect::<Vec<_>>() })
    }
    fn from_json_like(&self, v: &serde_json::Value) -> Result<Self> {
        let arr = v
            .get("coords")
            .and_then(|c| c.as_array())
            .ok_or_else(|| Error::Parse("exact scalar needs a \"coords\" array".into()))?;
        if arr.len() != self.field.phi {
            return Err(Error::Parse(format!("expected {} coordinates, got {}", self.field.phi, arr.len())));
        }
        let coords = arr
            .iter()
            .map(|c| match c {
                serde_json::Value::String(s) => parse_rational(s),
                serde_json::Value::Number(n) => parse_rational(&n.to_string()),
                _ => Err(Error::Parse("coordinate must be a string \"a/b\"".into())),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ExactScalar { field: self.field.clone(), coords })
    }
}
