//! Coefficients of Ad_Phi(e1) at the limit level, depth-one p-adic zeta
//! values, and cross-checks of the three expansions of har(q^alpha, w).
//!
//! Everything here is N = 1.

use crate::error::{Error, Result};
use crate::exact::bernoulli::bcoef_rational;
use crate::exact::rational::{binomial, binomial_neg, floor_log, rat, val_int};
use crate::exact::{PadicField, PadicScalar, Rat};
use crate::harmonic_integral::{
    ad_inverse, depth2_from_zetas, depth2_shape, finite_from_infinite, har_action_graded,
    harmonic_words,
};
use crate::mhs::{har, har_rational_cached};
use crate::ncseries::word::all_words;
use crate::ncseries::{HarmonicWord, Letter, NCSeries, Word};
use crate::scalar::Scalar;
use crate::summation::{engine, iter_har_series};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use std::sync::Arc;

/// Largest series truncation tried before giving up on a precision.
const MAX_TERMS: u64 = 400;
/// Engine truncations compared for the depth-two extraction certificate.
const EXTRACTION_STEP: usize = 4;

fn field(p: u64, prec: i64) -> Result<Arc<PadicField>> {
    PadicField::get(p, 1, prec.max(1))
}

fn qpow(q: u64, e: u64) -> Rat {
    Rat::from_integer(BigInt::from(q).pow(e as u32))
}

/// Valuation bound of the l-th term of the series for A[e0^b e1 e0^{n-1} e1].
fn term_bound(p: u64, n: u64, l: u64) -> i64 {
    n as i64 + l as i64 - 1 - floor_log(p, l + 1)
}

/// The exact partial sum of the series through l = lmax, before the unit division.
fn ad_partial_sum(q: u64, b: u64, n: u64, lmax: u64) -> Rat {
    let mut acc = Rat::zero();
    for l in b.saturating_sub(1)..=lmax {
        let c = bcoef_rational(l as usize, b as usize);
        if c.is_zero() {
            continue;
        }
        acc += Rat::from_integer(binomial_neg(n, l)) * c * har_rational_cached(q, &[(n + l) as u32]);
    }
    acc
}

/// A_inf[e0^b e1 e0^{n-1} e1] computed from har(p^alpha0, (n+l)), l >= b-1.
/// The certificate is the term bound at the first omitted l.
pub fn ad_infinity_coeff(p: u64, b: u64, n: u64, alpha0: u32, target: i64) -> Result<PadicScalar> {
    if n == 0 || alpha0 == 0 {
        return Err(Error::Config("n and alpha0 must be positive".into()));
    }
    let f = field(p, target)?;
    if b == 0 {
        return Ok(f.zero(target));
    }
    let mut lmax = b.saturating_sub(1);
    while term_bound(p, n, lmax + 1) < target {
        lmax += 1;
        if lmax > MAX_TERMS {
            return Err(Error::UnreachablePrecision { requested: target, certified: term_bound(p, n, lmax) });
        }
    }
    let q = p.pow(alpha0);
    let unit = qpow(q, n + b) - Rat::one();
    let value = ad_partial_sum(q, b, n, lmax) / unit;
    Ok(f.from_rational(&value, target))
}

/// Where a zeta record sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZetaIndex {
    Decomposition { b: u64, n: u64 },
    Weight { k: u64 },
}

#[derive(Debug, Clone)]
pub struct ZetaRecord {
    pub index: ZetaIndex,
    pub value: PadicScalar,
    pub alpha0: u32,
    pub method: String,
    pub cert: i64,
}

impl ZetaRecord {
    /// The word whose coefficient defines the value, and the sign in front.
    pub fn convention(&self) -> (String, i64) {
        match self.index {
            ZetaIndex::Weight { k } => (format!("e0^{} e1", k - 1), -1),
            ZetaIndex::Decomposition { b, n } => (format!("e0^{b} e1 e0^{} e1", n - 1), 1),
        }
    }

    pub fn to_json(&self) -> Value {
        let index = match self.index {
            ZetaIndex::Decomposition { b, n } => json!({"b": b, "n": n}),
            ZetaIndex::Weight { k } => json!({"k": k}),
        };
        let (word, sign) = self.convention();
        json!({
            "index": index,
            "value": self.value.to_json(),
            "alpha0": self.alpha0,
            "method": self.method,
            "cert": self.cert,
            "word": word,
            "sign": sign,
        })
    }
}

/// zeta_p(k) = -Phi[e0^{k-1} e1] from each decomposition k = n + b with b >= 1,
/// using A[e0^b e1 e0^{n-1} e1] = (-1)^n C(k-1, b) Phi[e0^{k-1} e1]. Dividing by
/// the binomial costs its valuation, so each coefficient is computed that much deeper.
pub fn zeta_decompositions(p: u64, k: u64, alpha0: u32, target: i64) -> Result<Vec<ZetaRecord>> {
    if k < 2 {
        return Err(Error::Precondition(format!("zeta({k}) is not defined: Phi[e1] = 0 on the group")));
    }
    let mut out = Vec::new();
    for b in 1..k {
        let n = k - b;
        let c = binomial(k - 1, b);
        let loss = val_int(&c, p);
        let coeff = ad_infinity_coeff(p, b, n, alpha0, target + loss)?;
        let sign = if n.is_multiple_of(2) { -1 } else { 1 };
        let scale = Rat::new(BigInt::from(sign), c);
        let z = coeff.clone() * coeff.field.from_rational(&scale, coeff.prec + 1);
        let value = z.with_prec(coeff.prec - loss);
        out.push(ZetaRecord {
            index: ZetaIndex::Decomposition { b, n },
            cert: value.prec,
            value,
            alpha0,
            method: "ad-infinity series".into(),
        });
    }
    Ok(out)
}

/// zeta_p(k) checked across all decompositions; a disagreement beyond the
/// certificates is a convention fault, never averaged away.
pub fn zeta_depth1(p: u64, k: u64, alpha0: u32, target: i64) -> Result<ZetaRecord> {
    let values = zeta_decompositions(p, k, alpha0, target)?;
    for x in &values {
        for y in &values {
            let need = x.cert.min(y.cert);
            if x.value.agreement(&y.value) < need {
                return Err(Error::ConventionFault(format!(
                    "zeta({k}) from {:?} and {:?} agree only to {} digits, certificates {need}",
                    x.index,
                    y.index,
                    x.value.agreement(&y.value)
                )));
            }
        }
    }
    let best = values.into_iter().max_by_key(|r| r.cert).expect("k >= 2 gives one decomposition");
    Ok(ZetaRecord {
        index: ZetaIndex::Weight { k },
        method: "ad-infinity series, all decompositions".into(),
        ..best
    })
}

/// The limit data: A_inf = Ad_Phi(e1) and har_inf, both truncated at (wcap, dcap).
#[derive(Debug, Clone)]
pub struct InfinityData {
    pub p: u64,
    pub alpha0: u32,
    pub a: NCSeries<PadicScalar>,
    pub har: NCSeries<PadicScalar>,
}

fn e1e1(l: usize) -> Word {
    Word::e0_prefix(l, &Word(vec![Letter::X(0), Letter::X(0)]))
}

/// Builds A_inf and har_inf at precision about `target`.
///
/// Word depth two comes from the series for A and the zeta formula; har_inf in
/// harmonic depth one from har_Q - sum_b Q^{n+b} A[e0^b e1 e0^{n-1} e1]. With
/// dcap >= 3, harmonic depth two is read off the engine expansion at level Q
/// by triangular extraction; its certificate is the stabilization of that
/// expansion between two truncations, which is not a proof.
pub fn infinity_data(p: u64, alpha0: u32, wcap: usize, dcap: usize, target: i64) -> Result<InfinityData> {
    infinity_data_for(p, alpha0, wcap, dcap, target, None)
}

/// As [`infinity_data`], extracting only the listed depth-two harmonic words.
/// A target word of depth two only ever meets depth-three words e0^l embed(w)
/// of its own shape, so this is enough to evaluate it.
pub fn infinity_data_for(
    p: u64,
    alpha0: u32,
    wcap: usize,
    dcap: usize,
    target: i64,
    only: Option<&[HarmonicWord]>,
) -> Result<InfinityData> {
    if wcap < 2 || !(2..=3).contains(&dcap) {
        return Err(Error::Config(format!("infinity data needs weight cap >= 2 and depth cap 2 or 3, got ({wcap}, {dcap})")));
    }
    let work = target + 4;
    let f = field(p, work)?;
    let proto = f.zero(work);
    let q = p.pow(alpha0);
    let mut a = NCSeries::e1(&proto, 1, wcap, dcap);
    let mut z = vec![f.zero(work); wcap + 1];
    for k in 2..wcap {
        for b in 1..k {
            let n = k - b;
            let c = ad_infinity_coeff(p, b as u64, n as u64, alpha0, work)?;
            if n == 1 {
                z[k] = -c.clone();
            }
            a.set(Word::e0_prefix(b, &HarmonicWord::plain(&[n as u32]).embed(1)), c);
        }
    }
    let zf = |k: usize| z[k].clone();
    for w in all_words(wcap, 2, 1) {
        if let Some((i, j, k)) = depth2_shape(&w) {
            if k > 0 {
                a.set(w, depth2_from_zetas(&zf, i, j, k, &proto));
            }
        }
    }

    let mut h = NCSeries::zero(&proto, 1, wcap, dcap);
    h.harmonic = true;
    for n in 1..wcap {
        let mut acc = f.from_rational(&har_rational_cached(q, &[n as u32]), work);
        // Omitted terms b >= bmax have valuation >= (alpha0+1)(n+b) - 2 - log_p(b).
        let mut b = 1;
        while (alpha0 as i64 + 1) * (n + b) as i64 - 2 - floor_log(p, b as u64) < work {
            let c = if n + b < wcap {
                a.coeff(&Word::e0_prefix(b, &HarmonicWord::plain(&[n as u32]).embed(1)))
            } else {
                ad_infinity_coeff(p, b as u64, n as u64, alpha0, work - (alpha0 as i64) * (n + b) as i64)?
            };
            acc = acc - f.from_rational(&qpow(q, (n + b) as u64), work) * c;
            b += 1;
        }
        h.set(HarmonicWord::plain(&[n as u32]).embed(1), acc);
    }

    if dcap >= 3 {
        extract_depth2(q, &mut a, &mut h, target, only)?;
    }
    Ok(InfinityData { p, alpha0, a, har: h })
}

/// Depth-two extraction from the Lambda-expansion of the engine at level q.
fn extract_depth2(
    q: u64,
    a: &mut NCSeries<PadicScalar>,
    h: &mut NCSeries<PadicScalar>,
    target: i64,
    only: Option<&[HarmonicWord]>,
) -> Result<()> {
    let wcap = a.weight_cap;
    let f = a.proto().field.clone();
    let work = a.proto().prec;
    let words: Vec<HarmonicWord> = harmonic_words(wcap, 3, 1)
        .into_iter()
        .filter(|w| w.depth() == 2 && only.is_none_or(|o| o.contains(w)))
        .collect();
    for w in &words {
        let e = w.embed(1);
        let wt = w.weight();
        let lmax = (wcap - e.weight() + wt).max(crate::summation::engine_lmax(w, target));
        let lo = engine(w, q, lmax)?.constant_in_a();
        let hi = engine(w, q, lmax + EXTRACTION_STEP)?.constant_in_a();
        let coeff = |n: i64| -> Result<PadicScalar> {
            let x = hi.get(&n).cloned().unwrap_or_else(|| crate::ExactScalar::rational(rat(0)));
            let y = lo.get(&n).cloned().unwrap_or_else(|| crate::ExactScalar::rational(rat(0)));
            let x = f.embed(&x, work)?;
            let y = f.embed(&y, work)?;
            let cert = x.agreement(&y).min(work);
            Ok(x.with_prec(cert))
        };
        let cross = har_action_graded(a, h, std::slice::from_ref(w)).remove(w).unwrap_or_default();
        let cross_at = |n: i64| cross.coeff(n, 0).cloned().unwrap_or_else(|| f.zero(work));
        h.set(e.clone(), coeff(0)? - cross_at(0));
        for l in 0..=(wcap - e.weight()) {
            let n = (wt + l) as i64;
            a.set(Word::e0_prefix(l, &e), coeff(n)? - cross_at(n));
        }
    }
    Ok(())
}

/// Truncation bound for har_action(tau'(Lambda) X, h)(w) at caps (wcap, 3),
/// with v(Lambda) = vl, assuming v(X[u]) >= |u| - 3 - log_p(|u|).
fn action_truncation(p: u64, vl: i64, wcap: usize, w: &HarmonicWord) -> i64 {
    let deg = (wcap + 1 - w.word_len()) as i64;
    (vl + 1) * deg - 3 - floor_log(p, wcap as u64 + 1)
}

/// har(q^alpha, w) as a p-adic number with a certificate.
#[derive(Debug, Clone)]
pub struct Leg {
    pub name: &'static str,
    pub value: PadicScalar,
    pub cert: i64,
}

#[derive(Debug, Clone)]
pub struct ThreeWayReport {
    pub word: HarmonicWord,
    pub alpha0: u32,
    pub alpha: u32,
    pub legs: Vec<Leg>,
    /// (leg, leg, agreement, required)
    pub pairs: Vec<(&'static str, &'static str, i64, i64)>,
    pub pass: bool,
}

impl ThreeWayReport {
    pub fn to_json(&self) -> Value {
        json!({
            "word": self.word.to_string(),
            "alpha0": self.alpha0,
            "alpha": self.alpha,
            "legs": self.legs.iter().map(|l| json!({"name": l.name, "cert": l.cert, "value": l.value.to_json()})).collect::<Vec<_>>(),
            "pairs": self.pairs.iter().map(|(x, y, d, r)| json!({"legs": [x, y], "agreement": d, "required": r})).collect::<Vec<_>>(),
            "pass": self.pass,
        })
    }
}

/// har(p^alpha, w) from the limit data through the fixed-point formula.
pub fn fixed_point_leg(data: &InfinityData, w: &HarmonicWord, alpha: u32) -> Result<Leg> {
    if alpha == 0 || !alpha.is_multiple_of(data.alpha0) {
        return Err(Error::Config(format!("alpha = {alpha} is not a multiple of alpha0 = {}", data.alpha0)));
    }
    let proto = data.a.proto();
    let lam = proto.from_int_like(data.p as i64).pow(alpha as u64);
    let poly = har_action_graded(&data.a, &data.har, std::slice::from_ref(w)).remove(w).unwrap_or_default();
    let x = poly.eval_at(&lam, &proto.one_like());
    let cert = x.prec.min(action_truncation(data.p, alpha as i64, data.a.weight_cap, w));
    Ok(Leg { name: "fixed-point", cert, value: x.with_prec(cert) })
}

/// Caps (weight, depth) at which the legs of verify_three_way certify `target` for `w`.
pub fn caps_for(p: u64, w: &HarmonicWord, alpha0: u32, target: i64) -> (usize, usize) {
    let dcap = w.depth() + 1;
    // Smallest cap whose truncation bound at Lambda = Q reaches the target.
    let mut wcap = w.word_len() + 1;
    while action_truncation(p, alpha0 as i64, wcap, w) < target {
        wcap += 1;
    }
    (wcap, dcap)
}

/// har(Q^a, w) by iterating the harmonic action of tau'(Q^k) Ad_{Phi_Q}(e1)^{-1}
/// starting from the brute-force har_Q.
pub fn iterated_action_leg(data: &InfinityData, a: u32) -> Result<NCSeries<PadicScalar>> {
    let q = data.p.pow(data.alpha0);
    let proto = data.a.proto().clone();
    let qs = proto.from_int_like(q as i64);
    let g = finite_from_infinite(&data.a, &qs);
    let j = ad_inverse(&g);
    let words = harmonic_words(data.a.weight_cap, data.a.depth_cap, 1);
    let mut h = NCSeries::zero(&proto, 1, data.a.weight_cap, data.a.depth_cap);
    h.harmonic = true;
    for w in &words {
        h.set(w.embed(1), proto.field.embed(&har(q, w, 1), proto.prec)?);
    }
    let one = proto.one_like();
    for k in 1..a {
        let lam = qs.pow(k as u64);
        let graded = har_action_graded(&j, &h, &words);
        let mut next = h.empty_like();
        for (w, poly) in graded {
            next.set(w.embed(1), poly.eval_at(&lam, &one));
        }
        h = next;
    }
    Ok(h)
}

/// Compares the fixed-point leg (F), the iterated-action leg (I), the engine
/// leg (S) and brute force for har(p^alpha, w), alpha = a * alpha0, at each alpha.
pub fn verify_three_way(p: u64, w: &HarmonicWord, alpha0: u32, alphas: &[u32], target: i64) -> Result<Vec<ThreeWayReport>> {
    if w.depth() > 2 || w.depth() == 0 {
        return Err(Error::UnsupportedDepth(w.depth()));
    }
    if alpha0 == 0 || alphas.iter().any(|&al| al == 0 || al % alpha0 != 0) {
        return Err(Error::Config(format!("every alpha in {alphas:?} must be a positive multiple of alpha0 = {alpha0}")));
    }
    let (wcap, dcap) = caps_for(p, w, alpha0, target);
    let data = infinity_data_for(p, alpha0, wcap, dcap, target + 2, Some(std::slice::from_ref(w)))?;
    alphas.iter().map(|&alpha| three_way_at(&data, w, alpha, target)).collect()
}

fn three_way_at(data: &InfinityData, w: &HarmonicWord, alpha: u32, target: i64) -> Result<ThreeWayReport> {
    let (p, alpha0) = (data.p, data.alpha0);
    let a = alpha / alpha0;
    let wcap = data.a.weight_cap;
    let f = data.a.proto().field.clone();
    let fixed = fixed_point_leg(data, w, alpha)?;
    let ix = iterated_action_leg(data, a)?.coeff(&w.embed(1));
    let icert = ix.prec.min(action_truncation(p, alpha0 as i64, wcap, w));
    let sx = iter_har_series(p, alpha0, a, w, target)?;
    let brute = f.embed(&har(p.pow(alpha), w, 1), target + 8)?;

    let legs = vec![
        fixed,
        Leg { name: "integral-iteration", cert: icert, value: ix.with_prec(icert) },
        Leg { name: "series-iteration", cert: sx.prec, value: sx.clone() },
        Leg { name: "brute", cert: brute.prec, value: brute },
    ];
    let mut pairs = Vec::new();
    let mut pass = true;
    for i in 0..legs.len() {
        for k in i + 1..legs.len() {
            let need = legs[i].cert.min(legs[k].cert);
            let d = legs[i].value.agreement(&legs[k].value);
            pass &= d >= need && need >= target;
            pairs.push((legs[i].name, legs[k].name, d, need));
        }
    }
    Ok(ThreeWayReport { word: w.clone(), alpha0, alpha, legs, pairs, pass })
}

/// Report on the printed proportionality Q^b/(Q-1) G[u] = A_inf[u] with
/// u = e0^b e1 e0^{n-1} e1 and G = Ad_{Phi_Q}(e1) derived from A_inf.
/// `factor` is A_inf[u] / G[u] when G[u] is a nonzero p-adic number.
#[derive(Debug, Clone)]
pub struct RelationReport {
    pub b: u64,
    pub n: u64,
    pub alpha0: u32,
    pub printed_factor: Rat,
    pub lhs: PadicScalar,
    pub rhs: PadicScalar,
    pub factor: Option<PadicScalar>,
    pub holds: bool,
}

impl RelationReport {
    pub fn to_json(&self) -> Value {
        json!({
            "b": self.b,
            "n": self.n,
            "alpha0": self.alpha0,
            "printed_factor": crate::exact::rational::fmt_rational(&self.printed_factor),
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "factor": self.factor.as_ref().map(|f| f.to_json()),
            "holds": self.holds,
        })
    }
}

/// Never fails on a mismatch: the discrepancy goes into the report.
pub fn phi_alpha0_relation_check(p: u64, b: u64, n: u64, alpha0: u32, target: i64) -> Result<RelationReport> {
    if b == 0 || n == 0 {
        return Err(Error::Precondition("the relation is stated for b, n >= 1".into()));
    }
    let wcap = (b + n + 1) as usize;
    let data = infinity_data(p, alpha0, wcap.max(3), 2, target + 4)?;
    let q = p.pow(alpha0);
    let proto = data.a.proto().clone();
    let g = finite_from_infinite(&data.a, &proto.from_int_like(q as i64));
    let u = Word::e0_prefix(b as usize, &HarmonicWord::plain(&[n as u32]).embed(1));
    let rhs = data.a.coeff(&u).with_prec(target);
    let gu = g.coeff(&u);
    let printed = qpow(q, b) / (Rat::from_integer(BigInt::from(q)) - Rat::one());
    let lhs = (gu.clone() * proto.field.from_rational(&printed, target + 4)).with_prec(target);
    let factor = gu.inv().map(|inv| (rhs.clone() * inv).with_prec(target - gu.val.max(0)));
    let holds = lhs.agreement(&rhs) >= lhs.prec.min(rhs.prec);
    Ok(RelationReport { b, n, alpha0, printed_factor: printed, lhs, rhs, factor, holds })
}

/// z_k = Phi[e0^{k-1} e1] read back from a built A_inf.
pub fn zeta_from_data(data: &InfinityData, k: usize) -> PadicScalar {
    -data.a.coeff(&e1e1(k - 1))
}
