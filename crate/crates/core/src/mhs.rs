//! Multiple harmonic sums: brute-force oracle, localized sums, sums read off
//! Ad-series, and the q-adic digit splitting.

use crate::error::{Error, Result};
use crate::exact::rational::{binomial_neg, floor_log, pow_rat, rat, Rat};
use crate::exact::{ExactScalar, PadicField, PadicScalar};
use crate::ncseries::{HarmonicWord, NCSeries, Word};
use crate::scalar::Scalar;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Where the values of a table came from.
#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    Brute { m: u64 },
    FromAd { alpha_tag: String },
    Engine { alpha0: u32, alpha: u32 },
}

#[derive(Debug, Clone)]
pub struct HarmonicTable<S: Scalar> {
    pub entries: Vec<(HarmonicWord, S)>,
    pub provenance: Provenance,
}

impl HarmonicTable<ExactScalar> {
    /// Brute-force table of har(m, w) for the given words.
    pub fn brute(m: u64, words: &[HarmonicWord], n_roots: u32) -> Self {
        let entries = words.iter().map(|w| (w.clone(), har(m, w, n_roots))).collect();
        HarmonicTable { entries, provenance: Provenance::Brute { m } }
    }
}

impl<S: Scalar> HarmonicTable<S> {
    pub fn get(&self, w: &HarmonicWord) -> Option<&S> {
        self.entries.iter().find(|(x, _)| x == w).map(|(_, v)| v)
    }
}

/// h_m(w) for all m in 0..=mmax, by prefix sums; N = 1.
pub fn mhs_prefix_rational(w: &HarmonicWord, mmax: u64) -> Vec<Rat> {
    let len = mmax as usize + 1;
    // level[j] = sum over 0 < m_1 < .. < m_i < j
    let mut level: Vec<Rat> = vec![Rat::one(); len];
    for &n in &w.exps {
        let mut next = vec![Rat::zero(); len];
        let mut acc = Rat::zero();
        for j in 1..len {
            next[j] = acc.clone();
            let t = Rat::new(BigInt::one(), BigInt::from(j as u64).pow(n));
            acc += &level[j] * t;
        }
        if len > 0 {
            next[0] = Rat::zero();
        }
        level = next;
    }
    level
}

/// h_m(w) for all m in 0..=mmax in Q(zeta_N).
pub fn mhs_prefix(w: &HarmonicWord, mmax: u64, n_roots: u32) -> Vec<ExactScalar> {
    if n_roots == 1 {
        return mhs_prefix_rational(w, mmax).into_iter().map(ExactScalar::rational).collect();
    }
    let len = mmax as usize + 1;
    let (pairs, top) = w.ratio_form(n_roots);
    let one = ExactScalar::int(n_roots, 1);
    let mut level = vec![one.clone(); len];
    for &(n, rho) in &pairs {
        let mut next = vec![one.zero_like(); len];
        let mut acc = one.zero_like();
        for j in 1..len {
            next[j] = acc.clone();
            let t = ExactScalar::zeta_pow(n_roots, rho * j as i64)
                .scale(&Rat::new(BigInt::one(), BigInt::from(j as u64).pow(n)));
            acc = acc + level[j].clone() * t;
        }
        level = next;
    }
    level
        .into_iter()
        .enumerate()
        .map(|(m, v)| v * ExactScalar::zeta_pow(n_roots, -top * m as i64))
        .collect()
}

/// h_m(w) = sum_{0<m_1<..<m_d<m} prod (xi_{i+1}/xi_i)^{m_i} / m_i^{n_i} * xi_{d+1}^{-m}.
pub fn mhs_unweighted(m: u64, w: &HarmonicWord, n_roots: u32) -> ExactScalar {
    mhs_prefix(w, m, n_roots).pop().expect("non-empty table")
}

/// har(m, w) = m^{weight} h_m(w).
pub fn har(m: u64, w: &HarmonicWord, n_roots: u32) -> ExactScalar {
    let scale = Rat::from_integer(BigInt::from(m).pow(w.weight() as u32));
    mhs_unweighted(m, w, n_roots).scale(&scale)
}

/// har(m, w) for all m in 0..=mmax.
pub fn har_prefix(w: &HarmonicWord, mmax: u64, n_roots: u32) -> Vec<ExactScalar> {
    mhs_prefix(w, mmax, n_roots)
        .into_iter()
        .enumerate()
        .map(|(m, v)| v.scale(&Rat::from_integer(BigInt::from(m as u64).pow(w.weight() as u32))))
        .collect()
}

/// Cached rational har(q, (n)) for N = 1, used heavily by the series pipelines.
pub fn har_rational_cached(q: u64, exps: &[u32]) -> Rat {
    type Cache = Mutex<HashMap<(u64, Vec<u32>), Rat>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&(q, exps.to_vec())) {
        return v.clone();
    }
    let w = HarmonicWord::plain(exps);
    let v = mhs_prefix_rational(&w, q).pop().unwrap() * Rat::from_integer(BigInt::from(q).pow(w.weight() as u32));
    cache.lock().unwrap().insert((q, exps.to_vec()), v.clone());
    v
}

/// Localized sum over 0 < r_1 < .. < r_d < R of prod zeta^{rho_i r_i} r_i^{-e_i},
/// with arbitrary integer exponents e_i and ratio indices rho_i.
pub fn har_localized(r_bound: u64, exps: &[i64], ratios: &[i64], n_roots: u32) -> Result<ExactScalar> {
    if exps.is_empty() || ratios.len() != exps.len() {
        return Err(Error::Precondition("localized sums need depth >= 1 and one ratio per exponent".into()));
    }
    if n_roots == 1 {
        return Ok(ExactScalar::rational(har_localized_rational(r_bound, exps)));
    }
    Ok(localized_direct(r_bound, exps, ratios, n_roots))
}

fn localized_direct(r_bound: u64, exps: &[i64], ratios: &[i64], n_roots: u32) -> ExactScalar {
    let one = ExactScalar::int(n_roots, 1);
    // prefix[j] = sum over chains ending strictly below j
    let len = r_bound as usize + 1;
    let mut level = vec![one.clone(); len];
    for (&e, &rho) in exps.iter().zip(ratios) {
        let mut next = vec![one.zero_like(); len];
        let mut acc = one.zero_like();
        for j in 1..len {
            next[j] = acc.clone();
            let t = ExactScalar::zeta_pow(n_roots, rho * j as i64).scale(&pow_rat(&rat(j as i64), -e));
            acc = acc + level[j].clone() * t;
        }
        level = next;
    }
    level[len - 1].clone()
}

/// N = 1 localized sum with memoization; the series engine calls this often.
pub fn har_localized_rational(r_bound: u64, exps: &[i64]) -> Rat {
    type Cache = Mutex<HashMap<(u64, Vec<i64>), Rat>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&(r_bound, exps.to_vec())) {
        return v.clone();
    }
    let len = r_bound as usize + 1;
    let mut level = vec![Rat::one(); len];
    for &e in exps {
        let mut next = vec![Rat::zero(); len];
        let mut acc = Rat::zero();
        for j in 1..len {
            next[j] = acc.clone();
            acc += &level[j] * pow_rat(&rat(j as i64), -e);
        }
        level = next;
    }
    let v = level[len - 1].clone();
    cache.lock().unwrap().insert((r_bound, exps.to_vec()), v.clone());
    v
}

/// Which harmonic sums an Ad-series encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdMode {
    /// Finite alpha with the twist exponent used for the root sum.
    Finite(i64),
    /// alpha = +-infinity: no twist.
    Infinite,
}

/// (-1)^d sum_xi xi^{-tag} sum_{l <= lmax} A^{(xi)}[e0^l embed(w)].
pub fn har_from_ad<S: Scalar>(a: &NCSeries<S>, w: &HarmonicWord, mode: AdMode, lmax: usize) -> Result<S> {
    let n = a.n_roots;
    let base = w.embed(n);
    if a.weight_cap < base.weight() + lmax {
        return Err(Error::Precondition(format!(
            "weight cap {} below {} needed for L_max = {lmax}",
            a.weight_cap,
            base.weight() + lmax
        )));
    }
    let tag = match mode {
        AdMode::Finite(t) => t,
        AdMode::Infinite => 0,
    };
    let proto = a.proto();
    let mut total = proto.zero_like();
    for k in 0..n as i64 {
        let twisted = a.xi_twist(k);
        let mut s = proto.zero_like();
        for l in 0..=lmax {
            s = s + twisted.coeff(&Word::e0_prefix(l, &base));
        }
        total = total + proto.root_like(-k * tag) * s;
    }
    Ok(if w.depth() % 2 == 1 { -total } else { total })
}

/// Prefix tables y -> h_y(exps) for y in 0..=ymax, keyed by (p, prec, exps).
type HTable = Mutex<HashMap<(u64, i64, Vec<u32>), Arc<Vec<PadicScalar>>>>;

fn h_prefix_padic(field: &Arc<PadicField>, ymax: u64, exps: &[u32], prec: i64) -> Arc<Vec<PadicScalar>> {
    static CACHE: OnceLock<HTable> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (field.p, prec, exps.to_vec());
    if let Some(v) = cache.lock().unwrap().get(&key) {
        if v.len() as u64 > ymax {
            return v.clone();
        }
    }
    let len = ymax as usize + 1;
    let (prev, n): (Arc<Vec<PadicScalar>>, u32) = match exps.split_last() {
        Some((&n, rest)) if !rest.is_empty() => (h_prefix_padic(field, ymax, rest, prec), n),
        Some((&n, _)) => (Arc::new(vec![field.from_int(1, prec); len]), n),
        None => unreachable!("empty exponent list"),
    };
    let mut out = Vec::with_capacity(len);
    let mut acc = field.zero(prec);
    for y in 0..len {
        out.push(acc.clone());
        if y > 0 {
            let inv = field.from_rational(&Rat::new(BigInt::one(), BigInt::from(y as u64)), prec);
            acc = acc + prev[y].clone() * inv.pow(n as u64);
        }
    }
    let out = Arc::new(out);
    cache.lock().unwrap().insert(key, out.clone());
    out
}

fn h_q_padic(field: &Arc<PadicField>, q: u64, exps: &[u32], prec: i64) -> PadicScalar {
    // Round the table length up so one table serves every block size.
    let ymax = q.next_power_of_two().max(64);
    h_prefix_padic(field, ymax, exps, prec)[q as usize].clone()
}

/// A digit block [c, c + q^j) of [0, m).
#[derive(Debug, Clone, Copy)]
struct Block {
    c: u64,
    j: u32,
}

fn digit_blocks(m: u64, q: u64) -> Vec<Block> {
    let mut digits = Vec::new();
    let mut t = m;
    while t > 0 {
        digits.push(t % q);
        t /= q;
    }
    let mut blocks = Vec::new();
    let mut prefix = 0u64;
    for j in (0..digits.len()).rev() {
        let qj = q.pow(j as u32);
        for t in 0..digits[j] {
            blocks.push(Block { c: prefix + t * qj, j: j as u32 });
        }
        prefix += digits[j] * qj;
    }
    blocks
}

/// Smallest s with v_c * s - vq * (wt + s) >= target, where vq bounds v_p of the
/// summation variables inside the block.
fn block_lmax(vc: i64, vq: i64, wt: i64, target: i64) -> i64 {
    let slope = vc - vq;
    debug_assert!(slope >= 1);
    let need = target + vq * wt;
    ((need + slope - 1) / slope).max(0)
}

/// sum over 0 < y_1 < .. < y_k < q^j of prod (c + y_i)^{-n_i}, expanded as
/// sum_l prod C(-n_i, l_i) c^{sum l} h_{q^j}(n + l); valid since v(c) > v(y).
fn shifted_sum(field: &Arc<PadicField>, c: u64, qj: u64, exps: &[u32], target: i64, work: i64) -> PadicScalar {
    let p = field.p;
    let vc = crate::exact::rational::val_int(&BigInt::from(c), p);
    let vq = floor_log(p, qj - 1);
    let wt: i64 = exps.iter().map(|&n| n as i64).sum();
    let smax = block_lmax(vc, vq, wt, target);
    let cpad = field.from_int(c as i64, work);
    let mut total = field.zero(work);
    let k = exps.len();
    let mut ls = vec![0u32; k];
    loop {
        let s: u32 = ls.iter().sum();
        let mut coeff = Rat::one();
        for (n, l) in exps.iter().zip(&ls) {
            coeff *= Rat::from_integer(binomial_neg(*n as u64, *l as u64));
        }
        let shifted: Vec<u32> = exps.iter().zip(&ls).map(|(n, l)| n + l).collect();
        total = total + field.from_rational(&coeff, work) * cpad.pow(s as u64) * h_q_padic(field, qj, &shifted, work);
        // next multi-index with sum <= smax
        let mut i = 0;
        loop {
            if i == k {
                // Every omitted term has valuation >= the bound at s = smax + 1.
                let tail = vc * (smax + 1) - vq * (wt + smax + 1);
                return total.with_prec(tail);
            }
            ls[i] += 1;
            if ls.iter().sum::<u32>() as i64 <= smax {
                break;
            }
            ls[i] = 0;
            i += 1;
        }
    }
}

/// Sum over x_1 < .. < x_k in the block (x > 0) of prod x_i^{-n_i}.
fn block_sum(field: &Arc<PadicField>, b: Block, q: u64, exps: &[u32], target: i64, work: i64) -> PadicScalar {
    let qj = q.pow(b.j);
    if b.c == 0 {
        return h_q_padic(field, qj, exps, work);
    }
    let cinv = field.from_int(b.c as i64, work).inv().expect("c is nonzero");
    let head = cinv.pow(exps[0] as u64);
    if qj == 1 {
        // The block is the single point c.
        return if exps.len() == 1 { head } else { field.zero(work) };
    }
    let head = if exps.len() == 1 { head } else { head * shifted_sum(field, b.c, qj, &exps[1..], target, work) };
    shifted_sum(field, b.c, qj, exps, target, work) + head
}

/// h_m(w) through the q-adic digit decomposition of m, evaluated p-adically with
/// certified precision at least `target` when attainable. N = 1, depth <= 2.
pub fn split_by_digits(m: u64, w: &HarmonicWord, p: u64, q: u64, target: i64) -> Result<PadicScalar> {
    if m < 2 {
        return Err(Error::Precondition("split_by_digits needs m >= 2".into()));
    }
    if w.roots.iter().any(|&k| k != 0) {
        return Err(Error::Precondition("digit splitting is implemented for N = 1".into()));
    }
    if w.depth() > 2 {
        return Err(Error::UnsupportedDepth(w.depth()));
    }
    let mut qq = q;
    while qq.is_multiple_of(p) {
        qq /= p;
    }
    if qq != 1 || q < p {
        return Err(Error::Config(format!("q = {q} is not a power of p = {p}")));
    }
    // Values of h_m can have valuation down to -V * weight; keep that many guard digits.
    let vmax = floor_log(p, m - 1);
    let wt = w.weight() as i64;
    let inner_target = target + vmax * wt + 1;
    let work = inner_target + vmax * wt + 4;
    let field = PadicField::get(p, 1, work)?;
    let blocks = digit_blocks(m, q);
    let sums: Vec<Vec<PadicScalar>> = blocks
        .iter()
        .map(|&b| w.exps.iter().map(|&n| block_sum(&field, b, q, &[n], inner_target, work)).collect())
        .collect();
    let result = match w.depth() {
        1 => {
            let mut acc = field.zero(work);
            for s in &sums {
                acc = acc + s[0].clone();
            }
            acc
        }
        _ => {
            let mut acc = field.zero(work);
            let mut below = field.zero(work);
            for (i, &b) in blocks.iter().enumerate() {
                acc = acc + below.clone() * sums[i][1].clone();
                acc = acc + block_sum(&field, b, q, &w.exps, inner_target, work);
                below = below + sums[i][0].clone();
            }
            acc
        }
    };
    Ok(result)
}
