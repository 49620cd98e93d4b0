//! Precision-tracked arithmetic in the unramified extension K = Q_p(mu_N).
//!
//! K is realized as Z_p[x]/(f) with f the Hensel lift of an irreducible
//! factor of x^N - 1 mod p; zeta_N maps to x and the Frobenius to x -> x^p.

use super::cyclotomic::{cyclotomic_poly, ExactScalar};
use super::modpoly::{self, Poly};
use super::rational::{val_int, Rat};
use crate::error::{Error, Result};
use crate::scalar::{Scalar, ScalarKind};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

const SEARCH_CAP: u64 = 2_000_000;
/// Extra digits of the lifted modulus beyond the working precision.
const LIFT_MARGIN: i64 = 96;

#[derive(Debug)]
pub struct PadicField {
    pub p: u64,
    pub n_roots: u32,
    /// Residue degree: order of p in (Z/N)^x.
    pub degree: usize,
    /// Absolute precision given to freshly created constants.
    pub default_prec: i64,
    lift_prec: i64,
    modulus: Poly,
    pk_lift: BigInt,
    /// x^(p*i) mod f for i < degree.
    frob: Vec<Poly>,
}

fn residue_degree(p: u64, n: u32) -> usize {
    let n = n as u64;
    if n == 1 {
        return 1;
    }
    let mut k = 1;
    let mut acc = p % n;
    while acc != 1 {
        acc = acc * p % n;
        k += 1;
    }
    k
}

impl PadicField {
    /// Shared field for (p, N) with the given working precision.
    pub fn get(p: u64, n_roots: u32, default_prec: i64) -> Result<Arc<PadicField>> {
        type Cache = Mutex<HashMap<(u64, u32, i64), Arc<PadicField>>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
            return Err(Error::Config(format!("p = {p} is not a prime")));
        }
        if n_roots == 0 || (n_roots as u64).is_multiple_of(p) {
            return Err(Error::Config(format!("need gcd(p, N) = 1, got p = {p}, N = {n_roots}")));
        }
        if default_prec < 1 {
            return Err(Error::Config("precision must be at least 1".into()));
        }
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(f) = cache.lock().unwrap().get(&(p, n_roots, default_prec)) {
            return Ok(f.clone());
        }
        let field = Arc::new(Self::build(p, n_roots, default_prec)?);
        cache.lock().unwrap().insert((p, n_roots, default_prec), field.clone());
        Ok(field)
    }

    fn build(p: u64, n_roots: u32, default_prec: i64) -> Result<PadicField> {
        let degree = residue_degree(p, n_roots);
        let pb = BigInt::from(p);
        let phi_n = cyclotomic_poly(n_roots);
        let fbar = modpoly::find_monic(p, degree, SEARCH_CAP, |cand| {
            modpoly::divrem(&phi_n, cand, &pb, &pb).1.is_empty()
        })
        .ok_or_else(|| Error::Config(format!("no degree-{degree} factor of Phi_{n_roots} mod {p} found within search cap")))?;

        let mut xn1 = vec![BigInt::zero(); n_roots as usize + 1];
        xn1[0] = -BigInt::one();
        xn1[n_roots as usize] = BigInt::one();

        let lift_prec = default_prec + LIFT_MARGIN;
        let (hbar, rem) = modpoly::divrem(&xn1, &fbar, &pb, &pb);
        assert!(rem.is_empty(), "factor must divide x^N - 1 mod p");
        let (g, _s, t) = modpoly::xgcd_fp(&fbar, &hbar, &pb);
        assert!(g == vec![BigInt::one()], "Hensel lifting needs coprime factors (p must not divide N)");
        let mut f = fbar.clone();
        let mut h = hbar;
        let mut pk = pb.clone();
        for _ in 1..lift_prec {
            let pk1 = &pk * &pb;
            let diff = modpoly::sub(&xn1, &modpoly::mul(&f, &h, &pk1), &pk1);
            let e: Poly = diff.iter().map(|c| (c / &pk).mod_floor(&pb)).collect();
            let df = modpoly::divrem(&modpoly::mul(&t, &e, &pb), &fbar, &pb, &pb).1;
            let step: Poly = df.iter().map(|c| c * &pk).collect();
            f = modpoly::add(&f, &step, &pk1);
            let (hq, hr) = modpoly::divrem(&xn1, &f, &pk1, &pb);
            assert!(hr.is_empty(), "Hensel step failed to keep the factorization");
            h = hq;
            pk = pk1;
        }
        let mut field = PadicField {
            p,
            n_roots,
            degree,
            default_prec,
            lift_prec,
            modulus: f,
            pk_lift: pk,
            frob: Vec::new(),
        };
        let xp = field.x_pow(p);
        let mut frob = vec![vec![BigInt::one()]];
        for i in 1..degree {
            let prev: &Poly = &frob[i - 1];
            frob.push(field.mulmod(prev, &xp, &field.pk_lift.clone()));
        }
        field.frob = frob;
        Ok(field)
    }

    fn mulmod(&self, a: &[BigInt], b: &[BigInt], m: &BigInt) -> Poly {
        let prod = modpoly::mul(a, b, m);
        let pb = BigInt::from(self.p);
        modpoly::divrem(&prod, &self.modulus, m, &pb).1
    }

    fn x_pow(&self, e: u64) -> Poly {
        let m = self.pk_lift.clone();
        let mut acc: Poly = vec![BigInt::one()];
        let mut base: Poly = modpoly::divrem(&[BigInt::zero(), BigInt::one()], &self.modulus, &m, &BigInt::from(self.p)).1;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mulmod(&acc, &base, &m);
            }
            base = self.mulmod(&base, &base, &m);
            e >>= 1;
        }
        acc
    }

    fn ppow(&self, k: i64) -> BigInt {
        num_traits::pow(BigInt::from(self.p), k.max(0) as usize)
    }

    /// The lifted modulus f (coefficients mod p^lift).
    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }

    pub fn zero(self: &Arc<Self>, prec: i64) -> PadicScalar {
        PadicScalar { field: self.clone(), val: prec, unit: vec![BigInt::zero(); self.degree], prec }
    }

    pub fn from_rational(self: &Arc<Self>, q: &Rat, prec: i64) -> PadicScalar {
        if q.is_zero() {
            return self.zero(prec);
        }
        let v = val_int(q.numer(), self.p) - val_int(q.denom(), self.p);
        if prec <= v {
            return self.zero(prec);
        }
        let rel = prec - v;
        let m = self.ppow(rel);
        let pb = BigInt::from(self.p);
        let pv = self.ppow(v.abs());
        let (num, den) = if v >= 0 {
            (q.numer() / &pv, q.denom().clone())
        } else {
            (q.numer().clone(), q.denom() / &pv)
        };
        let u = (num * modpoly::inv_unit(&den, &m, &pb)).mod_floor(&m);
        let mut unit = vec![BigInt::zero(); self.degree];
        unit[0] = u;
        PadicScalar::normalized(self.clone(), v, unit, prec)
    }

    pub fn from_int(self: &Arc<Self>, n: i64, prec: i64) -> PadicScalar {
        self.from_rational(&Rat::from_integer(BigInt::from(n)), prec)
    }

    /// zeta_N^k at the given precision.
    pub fn root(self: &Arc<Self>, k: i64, prec: i64) -> PadicScalar {
        let k = k.rem_euclid(self.n_roots as i64) as u64;
        let mut unit = self.x_pow(k);
        unit.resize(self.degree, BigInt::zero());
        PadicScalar::normalized(self.clone(), 0, unit, prec)
    }

    /// Embeds an element of Q(zeta_N) at absolute precision `prec`.
    pub fn embed(self: &Arc<Self>, x: &ExactScalar, prec: i64) -> Result<PadicScalar> {
        if x.n() != self.n_roots {
            return Err(Error::Config(format!("cannot embed Q(zeta_{}) into a field built for N = {}", x.n(), self.n_roots)));
        }
        // Lower coordinate valuations need extra working digits.
        let vmin = x.coords.iter().filter_map(|c| super::rational::val_rat(c, self.p)).min().unwrap_or(0);
        let work = prec + (-vmin).max(0);
        let mut acc = self.zero(work);
        for (i, c) in x.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = acc + self.from_rational(c, work) * self.root(i as i64, work);
        }
        Ok(acc.with_prec(prec))
    }
}

/// An element p^val * unit of K known modulo p^prec.
#[derive(Clone)]
pub struct PadicScalar {
    pub field: Arc<PadicField>,
    pub val: i64,
    /// Unit coordinates in the basis 1, x, .., x^(o-1), reduced mod p^(prec - val).
    pub unit: Vec<BigInt>,
    pub prec: i64,
}

impl PadicScalar {
    fn normalized(field: Arc<PadicField>, val: i64, unit: Vec<BigInt>, prec: i64) -> PadicScalar {
        let rel = prec - val;
        if rel <= 0 {
            return field.zero(prec);
        }
        let m = field.ppow(rel);
        let mut unit: Vec<BigInt> = unit.iter().map(|c| c.mod_floor(&m)).collect();
        if unit.iter().all(|c| c.is_zero()) {
            return field.zero(prec);
        }
        let t = unit.iter().filter(|c| !c.is_zero()).map(|c| val_int(c, field.p)).min().unwrap_or(0);
        let val = val + t;
        if t > 0 {
            let pt = field.ppow(t);
            for c in unit.iter_mut() {
                *c = &*c / &pt;
            }
        }
        // The lifted modulus bounds the usable relative precision.
        let prec = prec.min(val + field.lift_prec);
        let m = field.ppow(prec - val);
        for c in unit.iter_mut() {
            *c = c.mod_floor(&m);
        }
        PadicScalar { field, val, unit, prec }
    }

    pub fn p(&self) -> u64 {
        self.field.p
    }

    fn rel(&self) -> i64 {
        self.prec - self.val
    }

    /// Lowers the absolute precision.
    pub fn with_prec(&self, prec: i64) -> PadicScalar {
        if prec >= self.prec {
            return self.clone();
        }
        if self.is_zero() {
            return self.field.zero(prec);
        }
        PadicScalar::normalized(self.field.clone(), self.val, self.unit.clone(), prec)
    }

    /// Number of p-adic digits on which `self` and `other` provably agree.
    pub fn agreement(&self, other: &PadicScalar) -> i64 {
        let d = self.clone() - other.clone();
        if d.is_zero() { d.prec } else { d.val }
    }

    /// The Frobenius x -> x^p.
    pub fn sigma(&self) -> PadicScalar {
        if self.is_zero() || self.field.degree == 1 {
            return self.clone();
        }
        let m = self.field.ppow(self.rel());
        let mut acc: Poly = Vec::new();
        for (i, c) in self.unit.iter().enumerate() {
            let term: Poly = self.field.frob[i].iter().map(|t| t * c).collect();
            acc = modpoly::add(&acc, &term, &m);
        }
        acc.resize(self.field.degree, BigInt::zero());
        PadicScalar::normalized(self.field.clone(), self.val, acc, self.prec)
    }

    /// For N = 1: the rational p^val * unit with unit in [0, p^rel).
    pub fn to_rational(&self) -> Option<Rat> {
        if self.field.degree != 1 {
            return None;
        }
        if self.is_zero() {
            return Some(Rat::zero());
        }
        let u = Rat::from_integer(self.unit[0].clone());
        Some(u * super::rational::pow_rat(&Rat::from_integer(BigInt::from(self.p())), self.val))
    }

    fn check(&self, o: &Self) {
        assert!(
            self.field.p == o.field.p && self.field.n_roots == o.field.n_roots,
            "mixing p-adic elements of different fields"
        );
    }
}

impl PartialEq for PadicScalar {
    fn eq(&self, o: &Self) -> bool {
        self.field.p == o.field.p
            && self.field.n_roots == o.field.n_roots
            && self.prec == o.prec
            && (self.is_zero() && o.is_zero() || self.val == o.val && self.unit == o.unit)
    }
}

impl fmt::Debug for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "O({}^{})", self.p(), self.prec);
        }
        let u: Vec<String> = self.unit.iter().map(|c| c.to_string()).collect();
        write!(f, "{}^{}*[{}] + O({}^{})", self.p(), self.val, u.join(", "), self.p(), self.prec)
    }
}

impl Add for PadicScalar {
    type Output = PadicScalar;
    fn add(self, o: Self) -> Self {
        self.check(&o);
        let prec = self.prec.min(o.prec);
        if o.is_zero() {
            return self.with_prec(prec);
        }
        if self.is_zero() {
            return o.with_prec(prec);
        }
        let v = self.val.min(o.val);
        if prec <= v {
            return self.field.zero(prec);
        }
        let sa = self.field.ppow(self.val - v);
        let sb = self.field.ppow(o.val - v);
        let unit = self.unit.iter().zip(&o.unit).map(|(a, b)| a * &sa + b * &sb).collect();
        PadicScalar::normalized(self.field, v, unit, prec)
    }
}

impl Neg for PadicScalar {
    type Output = PadicScalar;
    fn neg(self) -> Self {
        if self.is_zero() {
            return self;
        }
        let unit = self.unit.iter().map(|c| -c).collect();
        PadicScalar::normalized(self.field, self.val, unit, self.prec)
    }
}

impl Sub for PadicScalar {
    type Output = PadicScalar;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Mul for PadicScalar {
    type Output = PadicScalar;
    fn mul(self, o: Self) -> Self {
        self.check(&o);
        match (self.is_zero(), o.is_zero()) {
            (true, true) => return self.field.zero(self.prec + o.prec),
            (true, false) => return self.field.zero(self.prec + o.val),
            (false, true) => return self.field.zero(o.prec + self.val),
            _ => {}
        }
        let val = self.val + o.val;
        let prec = (self.prec + o.val).min(o.prec + self.val);
        let m = self.field.ppow(prec - val);
        let mut unit = if self.field.degree == 1 {
            vec![(&self.unit[0] * &o.unit[0]).mod_floor(&m)]
        } else {
            self.field.mulmod(&self.unit, &o.unit, &m)
        };
        unit.resize(self.field.degree, BigInt::zero());
        PadicScalar::normalized(self.field, val, unit, prec)
    }
}

impl Scalar for PadicScalar {
    const KIND: ScalarKind = ScalarKind::Padic;

    fn zero_like(&self) -> Self {
        self.field.zero(self.field.default_prec)
    }
    fn one_like(&self) -> Self {
        self.field.from_int(1, self.field.default_prec)
    }
    fn from_rational_like(&self, q: &Rat) -> Self {
        self.field.from_rational(q, self.field.default_prec)
    }
    fn root_like(&self, k: i64) -> Self {
        self.field.root(k, self.field.default_prec)
    }
    fn is_zero(&self) -> bool {
        self.unit.iter().all(|c| c.is_zero())
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let field = &self.field;
        let pb = BigInt::from(field.p);
        let rel = self.rel();
        let m = field.ppow(rel);
        let mut y: Poly = if field.degree == 1 {
            vec![modpoly::inv_mod_prime(&self.unit[0], &pb)]
        } else {
            let fbar = modpoly::reduce(&field.modulus, &pb);
            let (g, s, _) = modpoly::xgcd_fp(&self.unit, &fbar, &pb);
            debug_assert!(g == vec![BigInt::one()]);
            s
        };
        let mut k = 1;
        while k < rel {
            k = (2 * k).min(rel);
            let mk = field.ppow(k);
            let uy = field.mulmod(&self.unit, &y, &mk);
            let two_minus = modpoly::sub(&[BigInt::from(2)], &uy, &mk);
            y = field.mulmod(&y, &two_minus, &mk);
        }
        let mut y = modpoly::reduce(&y, &m);
        y.resize(field.degree, BigInt::zero());
        Some(PadicScalar::normalized(field.clone(), -self.val, y, rel - self.val))
    }
    fn valuation(&self, p: u64) -> Option<i64> {
        debug_assert_eq!(p, self.field.p);
        if self.is_zero() { None } else { Some(self.val) }
    }
    fn to_json(&self) -> serde_json::Value {
        let p = self.field.p;
        let rel = if self.is_zero() { 0 } else { self.rel() };
        let pb = BigInt::from(p);
        let digits: Vec<Vec<u64>> = (0..rel)
            .map(|j| {
                let pj = self.field.ppow(j);
                self.unit
                    .iter()
                    .map(|c| {
                        let d: BigInt = (c / &pj).mod_floor(&pb);
                        u64::try_from(d).unwrap_or(0)
                    })
                    .collect()
            })
            .collect();
        let val = if self.is_zero() { self.prec } else { self.val };
        serde_json::json!({ "val": val, "unit": digits, "prec": self.prec })
    }
    fn from_json_like(&self, v: &serde_json::Value) -> Result<Self> {
        let bad = |s: &str| Error::Parse(format!("p-adic scalar JSON: {s}"));
        let val = v.get("val").and_then(|x| x.as_i64()).ok_or_else(|| bad("missing \"val\""))?;
        let prec = v.get("prec").and_then(|x| x.as_i64()).ok_or_else(|| bad("missing \"prec\""))?;
        let rows = v.get("unit").and_then(|x| x.as_array()).ok_or_else(|| bad("missing \"unit\""))?;
        let field = self.field.clone();
        let mut unit = vec![BigInt::zero(); field.degree];
        for (j, row) in rows.iter().enumerate() {
            let row = row.as_array().ok_or_else(|| bad("unit rows must be arrays"))?;
            if row.len() != field.degree {
                return Err(bad("digit row length must equal the residue degree"));
            }
            let pj = field.ppow(j as i64);
            for (i, d) in row.iter().enumerate() {
                let d = d.as_u64().filter(|d| *d < field.p).ok_or_else(|| bad("digits must lie in [0, p)"))?;
                unit[i] += BigInt::from(d) * &pj;
            }
        }
        Ok(PadicScalar::normalized(field, val, unit, prec))
    }
}
