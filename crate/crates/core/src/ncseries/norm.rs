//! The (Lambda, D)-norm polynomials: sup of |f[w]|_p per (weight, depth).

use super::series::NCSeries;
use crate::exact::rational::{pow_rat, rat, Rat};
use crate::scalar::Scalar;
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormPoly {
    pub p: u64,
    pub weight_cap: usize,
    pub depth_cap: usize,
    /// (n, d) -> p^{-v}; absent entries are zero.
    pub entries: BTreeMap<(usize, usize), Rat>,
}

impl NormPoly {
    pub fn new(p: u64, weight_cap: usize, depth_cap: usize) -> Self {
        NormPoly { p, weight_cap, depth_cap, entries: BTreeMap::new() }
    }

    /// Max-aggregates |c| into entry (n, d).
    pub fn absorb(&mut self, n: usize, d: usize, abs: Rat) {
        if abs.is_zero() || n > self.weight_cap || d > self.depth_cap {
            return;
        }
        let e = self.entries.entry((n, d)).or_insert_with(Rat::zero);
        if abs > *e {
            *e = abs;
        }
    }

    pub fn entry(&self, n: usize, d: usize) -> Rat {
        self.entries.get(&(n, d)).cloned().unwrap_or_else(Rat::zero)
    }

    /// Product of norm polynomials in Lambda and D, truncated at the caps.
    pub fn mul(&self, o: &NormPoly) -> NormPoly {
        let wcap = self.weight_cap.min(o.weight_cap);
        let dcap = self.depth_cap.min(o.depth_cap);
        let mut out = NormPoly::new(self.p, wcap, dcap);
        for (&(n1, d1), a) in &self.entries {
            for (&(n2, d2), b) in &o.entries {
                if n1 + n2 <= wcap && d1 + d2 <= dcap {
                    *out.entries.entry((n1 + n2, d1 + d2)).or_insert_with(Rat::zero) += a * b;
                }
            }
        }
        out
    }

    /// Multiplication by Lambda^a D^b.
    pub fn shift(&self, a: usize, b: usize) -> NormPoly {
        let mut out = NormPoly::new(self.p, self.weight_cap, self.depth_cap);
        for (&(n, d), c) in &self.entries {
            if n + a <= self.weight_cap && d + b <= self.depth_cap {
                out.entries.insert((n + a, d + b), c.clone());
            }
        }
        out
    }

    /// Substitutes Lambda -> |kappa| Lambda, where |kappa| = p^{-vk}.
    pub fn scale_lambda(&self, vk: i64) -> NormPoly {
        let pr = rat(self.p as i64);
        let mut out = self.clone();
        for ((n, _), c) in out.entries.iter_mut() {
            *c = &*c * pow_rat(&pr, -vk * *n as i64);
        }
        out
    }

    /// Coefficientwise comparison on the common caps.
    pub fn le(&self, o: &NormPoly) -> bool {
        let wcap = self.weight_cap.min(o.weight_cap);
        let dcap = self.depth_cap.min(o.depth_cap);
        self.entries.iter().all(|(&(n, d), a)| n > wcap || d > dcap || *a <= o.entry(n, d))
    }

    /// Entry at (n, d) as a valuation, `None` for zero.
    pub fn valuation(&self, n: usize, d: usize) -> Option<i64> {
        let e = self.entries.get(&(n, d))?;
        let num = crate::exact::rational::val_int(e.numer(), self.p);
        let den = crate::exact::rational::val_int(e.denom(), self.p);
        Some(den - num)
    }
}

pub fn abs_p(v: i64, p: u64) -> Rat {
    pow_rat(&Rat::from_integer(BigInt::from(p)), -v)
}

/// Entry (n, d) = max over words of weight n and depth d of |f[w]|_p.
pub fn norm_ld<S: Scalar>(f: &NCSeries<S>, p: u64) -> NormPoly {
    let mut out = NormPoly::new(p, f.weight_cap, f.depth_cap);
    for (w, c) in f.terms() {
        if let Some(v) = c.valuation(p) {
            out.absorb(w.weight(), w.depth(), abs_p(v, p));
        }
    }
    out
}

/// Depth-indexed sups: d -> max over all weights.
pub fn norm_d<S: Scalar>(f: &NCSeries<S>, p: u64) -> BTreeMap<usize, Rat> {
    let mut out: BTreeMap<usize, Rat> = BTreeMap::new();
    for ((_, d), c) in norm_ld(f, p).entries {
        let e = out.entry(d).or_insert_with(Rat::zero);
        if c > *e {
            *e = c;
        }
    }
    out
}
