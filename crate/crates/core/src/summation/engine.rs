//! Series-side iteration: har(Q^a, w) as an expansion in (Lambda, a).
//!
//! Every m < Q^a is written uniquely as m = Q^v (Q u + r) with 0 < r < Q. After
//! expanding (Q u + r)^{-n} binomially, the u-sums are closed by Faulhaber
//! polynomials, the r-sums are localized harmonic sums at Q, and the
//! v-sums are geometric-polynomial sums with the symbolic bound a. The block
//! with binomial indices (l_i) is an exact finite identity, so truncating the
//! l-sums is the only approximation.

use super::closed_form::{chain_sum_closed, ExpPoly};
use super::expansion::ExpansionPoly;
use crate::error::{Error, Result};
use crate::exact::bernoulli::bcoef_rational;
use crate::exact::rational::{binomial_neg, pow_rat, rat, rat2, Rat};
use crate::exact::ExactScalar;
use crate::mhs::har_localized_rational;
use crate::ncseries::HarmonicWord;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::HashMap;

// Monomial exponents: powers of u1, u2, r1, r2 and exponents of Q^a, Q^{v1}, Q^{v2}.
const U1: usize = 0;
const U2: usize = 1;
const R1: usize = 2;
const R2: usize = 3;
const A: usize = 4;
const V1: usize = 5;
const V2: usize = 6;

type Key = [i32; 7];

#[derive(Debug, Clone, Default)]
struct MPoly(HashMap<Key, Rat>);

impl MPoly {
    fn mono(c: Rat, vars: &[(usize, i32)]) -> Self {
        let mut k = [0; 7];
        for &(i, e) in vars {
            k[i] = e;
        }
        let mut m = HashMap::new();
        if !c.is_zero() {
            m.insert(k, c);
        }
        MPoly(m)
    }

    fn one() -> Self {
        Self::mono(Rat::one(), &[])
    }

    fn add_term(&mut self, k: Key, c: Rat) {
        if c.is_zero() {
            return;
        }
        let slot = self.0.entry(k).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.0.remove(&k);
        }
    }

    fn add_scaled(&mut self, o: &MPoly, s: &Rat) {
        for (k, c) in &o.0 {
            self.add_term(*k, c * s);
        }
    }

    fn mul(&self, o: &MPoly) -> MPoly {
        let mut out = MPoly::default();
        for (k1, c1) in &self.0 {
            for (k2, c2) in &o.0 {
                let mut k = *k1;
                for i in 0..7 {
                    k[i] += k2[i];
                }
                out.add_term(k, c1 * c2);
            }
        }
        out
    }

    /// sum_{x=0}^{Y-1} x^l as a polynomial in Y.
    fn faul(l: usize, y: &MPoly) -> MPoly {
        let mut out = MPoly::default();
        let mut pw = MPoly::one();
        for m in 1..=l + 1 {
            pw = pw.mul(y);
            out.add_scaled(&pw, &bcoef_rational(l, m));
        }
        out
    }

    /// Sums the variable `idx` over [0, X).
    fn sum_var(&self, idx: usize, x: &MPoly) -> MPoly {
        let mut by_exp: HashMap<i32, MPoly> = HashMap::new();
        for (k, c) in &self.0 {
            let mut k2 = *k;
            k2[idx] = 0;
            by_exp.entry(k[idx]).or_default().add_term(k2, c.clone());
        }
        let mut out = MPoly::default();
        for (e, rest) in by_exp {
            let f = MPoly::faul(e as usize, x);
            let prod = rest.mul(&f);
            out.add_scaled(&prod, &Rat::one());
        }
        out
    }
}

fn single(q: u64, e: i64) -> Rat {
    har_localized_rational(q, &[-e])
}

/// (Q^beta) -> beta.
fn log_q(u: &Rat, q: u64) -> i64 {
    let qb = BigInt::from(q);
    let (mut x, sign) = if u.numer().is_one() { (u.denom().clone(), -1) } else { (u.numer().clone(), 1) };
    let mut k = 0;
    while !x.is_one() {
        assert!((&x % &qb).is_zero(), "marker is not a power of Q");
        x /= &qb;
        k += 1;
    }
    sign * k
}

fn qpow(q: u64, e: i64) -> Rat {
    pow_rat(&rat(q as i64), e)
}

/// Order pattern of the valuation vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pattern {
    /// Depth one: a single valuation.
    Single,
    /// v1 = v2.
    Eq,
    /// v1 < v2.
    Lt,
    /// v1 > v2.
    Gt,
}

/// Patterns partitioning the valuation vectors of a depth-d word.
pub fn patterns_for(depth: usize) -> Result<&'static [Pattern]> {
    match depth {
        1 => Ok(&[Pattern::Single]),
        2 => Ok(&[Pattern::Eq, Pattern::Lt, Pattern::Gt]),
        d => Err(Error::UnsupportedDepth(d)),
    }
}

/// coeff * Q^{a * a_exp} * sum over v_1 < .. < v_k < a of prod Q^{t_i v_i}, with
/// the chain variables listed innermost first.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternTerm {
    pub coeff: Rat,
    pub a_exp: i64,
    pub t: Vec<i64>,
}

fn r_key(r1: i32, r2: i32) -> Key {
    let mut k = [0; 7];
    k[R1] = r1;
    k[R2] = r2;
    k
}

/// Eliminates the quotient and remainder variables for one block and one
/// valuation pattern. The residual remainder sums are localized harmonic sums at Q.
pub fn eliminate_ur(w: &HarmonicWord, ls: &[usize], pattern: Pattern, q: u64) -> Result<Vec<PatternTerm>> {
    check_word(w)?;
    if ls.len() != w.depth() || !patterns_for(w.depth())?.contains(&pattern) {
        return Err(Error::Precondition(format!("pattern {pattern:?} with {} indices does not fit {w}", ls.len())));
    }
    let inv_q = rat2(1, q as i64);
    let mut out = Vec::new();
    if let [n] = w.exps[..] {
        let (n, l) = (n as i64, ls[0]);
        let base = qpow(q, l as i64) * Rat::from_integer(binomial_neg(n as u64, l as u64));
        let x = MPoly::mono(inv_q, &[(A, 1), (V1, -1)]);
        let p = MPoly::mono(Rat::one(), &[(U1, l as i32)]).sum_var(U1, &x);
        let rs = single(q, -n - l as i64);
        for (k, c) in &p.0 {
            out.push(PatternTerm { coeff: c * &base * &rs, a_exp: k[A] as i64, t: vec![k[V1] as i64 - n] });
        }
        return Ok(out);
    }
    let (n1, n2) = (w.exps[0] as i64, w.exps[1] as i64);
    let (l1, l2) = (ls[0], ls[1]);
    let base = qpow(q, (l1 + l2) as i64)
        * Rat::from_integer(binomial_neg(n1 as u64, l1 as u64) * binomial_neg(n2 as u64, l2 as u64));
    let (e1, e2) = (n1 + l1 as i64, n2 + l2 as i64);
    let u2_pow = MPoly::mono(Rat::one(), &[(U2, l2 as i32)]);
    match pattern {
        Pattern::Eq => {
            // u1 < u2 + [r1 < r2]; the r-sums split on r1 < r2 versus r1 >= r2.
            for eps in [0, 1] {
                let mut y = MPoly::mono(Rat::one(), &[(U2, 1)]);
                y.add_term([0; 7], rat(1 - eps));
                let p = MPoly::faul(l1, &y).mul(&u2_pow);
                let p = p.sum_var(U2, &MPoly::mono(inv_q.clone(), &[(A, 1), (V1, -1)]));
                let rs = if eps == 0 {
                    har_localized_rational(q, &[e1, e2])
                } else {
                    har_localized_rational(q, &[e2, e1]) + single(q, -e1 - e2)
                };
                for (k, c) in &p.0 {
                    out.push(PatternTerm { coeff: c * &rs * &base, a_exp: k[A] as i64, t: vec![k[V1] as i64 - n1 - n2] });
                }
            }
        }
        Pattern::Lt => {
            // u1 < Q^{v2-v1-1} (Q u2 + r2)
            let mut inner = MPoly::mono(rat(q as i64), &[(U2, 1)]);
            inner.add_term(r_key(0, 1), Rat::one());
            let y = MPoly::mono(inv_q.clone(), &[(V2, 1), (V1, -1)]).mul(&inner);
            let p = MPoly::faul(l1, &y).mul(&u2_pow);
            let p = p.sum_var(U2, &MPoly::mono(inv_q, &[(A, 1), (V2, -1)]));
            for (k, c) in &p.0 {
                let coeff = c * &base * single(q, -e1 + k[R1] as i64) * single(q, -e2 + k[R2] as i64);
                out.push(PatternTerm { coeff, a_exp: k[A] as i64, t: vec![k[V1] as i64 - n1, k[V2] as i64 - n2] });
            }
        }
        Pattern::Gt => {
            // Q^{v1-v2-1} (Q u1 + r1) <= u2 < Q^{a-1-v2}
            let mut inner = MPoly::mono(rat(q as i64), &[(U1, 1)]);
            inner.add_term(r_key(1, 0), Rat::one());
            let z = MPoly::mono(inv_q.clone(), &[(V1, 1), (V2, -1)]).mul(&inner);
            let mut p = MPoly::faul(l2, &MPoly::mono(inv_q.clone(), &[(A, 1), (V2, -1)]));
            p.add_scaled(&MPoly::faul(l2, &z), &rat(-1));
            let p = p.mul(&MPoly::mono(Rat::one(), &[(U1, l1 as i32)]));
            let p = p.sum_var(U1, &MPoly::mono(inv_q, &[(A, 1), (V1, -1)]));
            for (k, c) in &p.0 {
                let coeff = c * &base * single(q, -e1 + k[R1] as i64) * single(q, -e2 + k[R2] as i64);
                out.push(PatternTerm { coeff, a_exp: k[A] as i64, t: vec![k[V2] as i64 - n2, k[V1] as i64 - n1] });
            }
        }
        Pattern::Single => unreachable!("rejected above"),
    }
    Ok(out)
}

/// Sums pattern outputs over the valuation chains (bound M = a) and assembles
/// the expansion in (Lambda, a). Every pattern of the word's depth must be present.
pub fn sum_over_valuations(
    w: &HarmonicWord,
    q: u64,
    outputs: &[(Pattern, Vec<PatternTerm>)],
) -> Result<ExpansionPoly<ExactScalar>> {
    let mut acc = HashMap::new();
    sum_into(w, q, outputs, &mut acc)?;
    Ok(to_expansion(acc))
}

fn sum_into(
    w: &HarmonicWord,
    q: u64,
    outputs: &[(Pattern, Vec<PatternTerm>)],
    acc: &mut HashMap<(i64, u32), Rat>,
) -> Result<()> {
    for pat in patterns_for(w.depth())? {
        if !outputs.iter().any(|(p, _)| p == pat) {
            return Err(Error::Precondition(format!("missing valuation pattern {pat:?}")));
        }
    }
    let wt = w.weight() as i64;
    let mut chains: HashMap<Vec<i64>, ExpPoly> = HashMap::new();
    for (_, terms) in outputs {
        for term in terms {
            let g = chains.entry(term.t.clone()).or_insert_with(|| {
                let f: Vec<(Rat, Vec<Rat>)> = term.t.iter().map(|&t| (qpow(q, t), vec![Rat::one()])).collect();
                chain_sum_closed(&f)
            });
            for ((u, j), c) in &g.terms {
                let key = (wt + term.a_exp + log_q(u, q), *j);
                let slot = acc.entry(key).or_insert_with(Rat::zero);
                *slot += c * &term.coeff;
            }
        }
    }
    Ok(())
}

fn block_into(w: &HarmonicWord, q: u64, ls: &[usize], acc: &mut HashMap<(i64, u32), Rat>) -> Result<()> {
    let mut outputs = Vec::new();
    for &pat in patterns_for(w.depth())? {
        outputs.push((pat, eliminate_ur(w, ls, pat, q)?));
    }
    sum_into(w, q, &outputs, acc)
}

fn check_word(w: &HarmonicWord) -> Result<()> {
    if w.roots.iter().any(|&k| k != 0) {
        return Err(Error::Precondition("the series engine is implemented for N = 1".into()));
    }
    match w.depth() {
        1 | 2 => Ok(()),
        d => Err(Error::UnsupportedDepth(d)),
    }
}

fn to_expansion(out: HashMap<(i64, u32), Rat>) -> ExpansionPoly<ExactScalar> {
    let mut e = ExpansionPoly::new();
    for ((n, m), c) in out {
        if c.is_zero() {
            continue;
        }
        e.add_term(n, m, ExactScalar::rational(c));
    }
    e
}

/// The block with binomial indices `ls` (one per letter of `w`), as an exact
/// expansion in (Lambda = Q^a, a).
pub fn engine_block(w: &HarmonicWord, q: u64, ls: &[usize]) -> Result<ExpansionPoly<ExactScalar>> {
    let mut acc = HashMap::new();
    block_into(w, q, ls, &mut acc)?;
    Ok(to_expansion(acc))
}

/// Sum of all blocks with l_1 + .. + l_d <= lmax.
pub fn engine(w: &HarmonicWord, q: u64, lmax: usize) -> Result<ExpansionPoly<ExactScalar>> {
    check_word(w)?;
    let mut acc = HashMap::new();
    match w.depth() {
        1 => {
            for l in 0..=lmax {
                block_into(w, q, &[l], &mut acc)?;
            }
        }
        _ => {
            for l1 in 0..=lmax {
                for l2 in 0..=lmax - l1 {
                    block_into(w, q, &[l1, l2], &mut acc)?;
                }
            }
        }
    }
    Ok(to_expansion(acc))
}
/// Depth-one closed form:
/// har(Q^a, (n)) = sum_l C(-n, l) har(Q, (n+l)) sum_{m=1}^{l+1} 𝓑^l_m (Lambda^{n+m} - 1) / (Q^{n+m} - 1).
pub fn depth1_closed_form(n: u32, q: u64, lmax: usize) -> ExpansionPoly<ExactScalar> {
    let mut e = ExpansionPoly::new();
    for l in 0..=lmax {
        let h = crate::mhs::har_rational_cached(q, &[n + l as u32]) * Rat::from_integer(binomial_neg(n as u64, l as u64));
        for m in 1..=l + 1 {
            let k = n as i64 + m as i64;
            let c = &h * bcoef_rational(l, m) / (qpow(q, k) - Rat::one());
            e.add_term(k, 0, ExactScalar::rational(c.clone()));
            e.add_term(0, 0, ExactScalar::rational(-c));
        }
    }
    e
}
