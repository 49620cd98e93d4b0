//! The summation map, the harmonic action of Ad-series on harmonic-part
//! series, and the fixed-point and iteration formulas built from them.
//!
//! A harmonic-part series is an [`NCSeries`] with the `harmonic` flag set and
//! terms on embedded harmonic words only.

use crate::error::{Error, Result};
use crate::ihara::adjoint_ihara;
use crate::ncseries::word::all_words;
use crate::ncseries::{HarmonicWord, Letter, NCSeries, Word};
use crate::scalar::Scalar;
use crate::summation::ExpansionPoly;
use std::collections::BTreeMap;

/// Harmonic words whose embedding fits in length `len_cap` and word depth `dcap`.
pub fn harmonic_words(len_cap: usize, dcap: usize, n_roots: u32) -> Vec<HarmonicWord> {
    all_words(len_cap, dcap, n_roots).iter().filter_map(HarmonicWord::from_word).collect()
}

fn harmonic_like<S: Scalar>(proto: &S, n_roots: u32, wcap: usize, dcap: usize) -> NCSeries<S> {
    let mut out = NCSeries::zero(proto, n_roots, wcap, dcap);
    out.harmonic = true;
    out
}

/// (Sigma f)(w) = sum_{l <= lmax} f[e0^l embed(w)] for every harmonic word with
/// room for all l up to `lmax` under the caps of `f`.
pub fn sigma_sum<S: Scalar>(f: &NCSeries<S>, lmax: usize) -> Result<NCSeries<S>> {
    if f.weight_cap < lmax + 2 {
        return Err(Error::Precondition(format!(
            "weight cap {} too small for lmax = {lmax}",
            f.weight_cap
        )));
    }
    let wcap = f.weight_cap - lmax;
    let mut out = harmonic_like(f.proto(), f.n_roots, wcap, f.depth_cap);
    for w in harmonic_words(wcap, f.depth_cap, f.n_roots) {
        let e = w.embed(f.n_roots);
        let mut acc = f.proto().zero_like();
        for l in 0..=lmax {
            if let Some(c) = f.get(&Word::e0_prefix(l, &e)) {
                acc = acc + c.clone();
            }
        }
        out.set(e, acc);
    }
    Ok(out)
}

/// Places each harmonic coefficient on its embedded word.
pub fn canonical_section<S: Scalar>(h: &NCSeries<S>) -> NCSeries<S> {
    let mut out = h.harmonic_project();
    out.harmonic = false;
    out
}

/// Coefficient of `target` in f(e0, (g^{(k)})_k), split by grade |target| - |f|.
/// Each non-e0 letter of f is matched with a nonempty piece of `target`.
fn graded_coeff<S: Scalar>(images: &[NCSeries<S>], f: &[(Word, S)], target: &Word) -> BTreeMap<usize, S> {
    let t = &target.0;
    let tdepth = target.depth();
    let mut out: BTreeMap<usize, S> = BTreeMap::new();
    let proto = images[0].proto();
    for (fw, fc) in f {
        let fl = &fw.0;
        if fl.len() > t.len() || fw.depth() > tdepth {
            continue;
        }
        let mut cur: Vec<Option<S>> = vec![None; t.len() + 1];
        cur[0] = Some(proto.one_like());
        for (j, letter) in fl.iter().enumerate() {
            let remaining = fl.len() - j - 1;
            let mut next: Vec<Option<S>> = vec![None; t.len() + 1];
            for i in 0..t.len() {
                let Some(v) = &cur[i] else { continue };
                match letter {
                    Letter::E0 => {
                        if t[i] == Letter::E0 {
                            acc_opt(&mut next[i + 1], v.clone());
                        }
                    }
                    Letter::X(k) => {
                        let img = &images[*k as usize];
                        for end in i + 1..=t.len() - remaining {
                            if let Some(c) = img.get(&Word(t[i..end].to_vec())) {
                                acc_opt(&mut next[end], v.clone() * c.clone());
                            }
                        }
                    }
                }
            }
            cur = next;
        }
        if let Some(v) = cur[t.len()].take() {
            let grade = t.len() - fl.len();
            let slot = out.entry(grade).or_insert_with(|| proto.zero_like());
            *slot = slot.clone() + v * fc.clone();
        }
    }
    out
}

fn acc_opt<S: Scalar>(slot: &mut Option<S>, v: S) {
    *slot = Some(match slot.take() {
        Some(x) => x + v,
        None => v,
    });
}

fn section_terms<S: Scalar>(h: &NCSeries<S>) -> Vec<(Word, S)> {
    let mut f = vec![(Word(vec![Letter::X(0)]), h.proto().one_like())];
    f.extend(canonical_section(h).terms().map(|(w, c)| (w.clone(), c.clone())));
    f
}

fn twisted_images<S: Scalar>(g: &NCSeries<S>) -> Vec<NCSeries<S>> {
    (0..g.n_roots as i64).map(|k| g.xi_twist(k)).collect()
}

/// (g o_har h)(w) = Sigma(g o_Ad (e1 + section(h)))(w), for every harmonic word
/// with room for l up to `lmax` under the caps of `g`.
pub fn har_action<S: Scalar>(g: &NCSeries<S>, h: &NCSeries<S>, lmax: usize) -> Result<NCSeries<S>> {
    if g.n_roots != h.n_roots {
        return Err(Error::CapMismatch(format!("N = {} vs N = {}", g.n_roots, h.n_roots)));
    }
    if g.weight_cap < lmax + 2 {
        return Err(Error::CapMismatch(format!("weight cap {} too small for lmax = {lmax}", g.weight_cap)));
    }
    let wcap = g.weight_cap - lmax;
    let images = twisted_images(g);
    let f = section_terms(h);
    let mut out = harmonic_like(g.proto(), g.n_roots, wcap, g.depth_cap);
    for w in harmonic_words(wcap, g.depth_cap, g.n_roots) {
        let e = w.embed(g.n_roots);
        let mut acc = g.proto().zero_like();
        for l in 0..=lmax {
            for (_, c) in graded_coeff(&images, &f, &Word::e0_prefix(l, &e)) {
                acc = acc + c;
            }
        }
        out.set(e, acc);
    }
    Ok(out)
}

/// The m-parametrized action (g, h) -> har_action(tau(m) g, h).
pub fn har_action_at<S: Scalar>(m: &S, g: &NCSeries<S>, h: &NCSeries<S>, lmax: usize) -> Result<NCSeries<S>> {
    har_action(&g.tau_scale(m), h, lmax)
}

/// har_action(tau'(Lambda) g, h)(w) as a polynomial in Lambda, using every l
/// allowed by the caps of `g`. The grade of a term is |target| - |f|.
pub fn har_action_graded<S: Scalar>(
    g: &NCSeries<S>,
    h: &NCSeries<S>,
    words: &[HarmonicWord],
) -> BTreeMap<HarmonicWord, ExpansionPoly<S>> {
    let images = twisted_images(g);
    let f = section_terms(h);
    let mut out = BTreeMap::new();
    for w in words {
        let e = w.embed(g.n_roots);
        let mut poly = ExpansionPoly::new();
        if e.weight() <= g.weight_cap && e.depth() <= g.depth_cap {
            for l in 0..=g.weight_cap - e.weight() {
                for (grade, c) in graded_coeff(&images, &f, &Word::e0_prefix(l, &e)) {
                    poly.add_term(grade as i64, 0, c);
                }
            }
        }
        out.insert(w.clone(), poly);
    }
    out
}

/// har_action(tau'(lambda) A_inf, har_inf), truncated at the caps of `a_inf`.
pub fn fixed_point_eval<S: Scalar>(a_inf: &NCSeries<S>, har_inf: &NCSeries<S>, lambda: &S) -> NCSeries<S> {
    let words = harmonic_words(a_inf.weight_cap, a_inf.depth_cap, a_inf.n_roots);
    let graded = har_action_graded(a_inf, har_inf, &words);
    let mut out = harmonic_like(a_inf.proto(), a_inf.n_roots, a_inf.weight_cap, a_inf.depth_cap);
    let one = a_inf.proto().one_like();
    for (w, poly) in graded {
        out.set(w.embed(a_inf.n_roots), poly.eval_at(lambda, &one));
    }
    out
}

/// The o_Ad inverse: B(e0, A) = e1, solved weight by weight.
pub fn ad_inverse<S: Scalar>(a: &NCSeries<S>) -> NCSeries<S> {
    let e1 = NCSeries::e1(a.proto(), a.n_roots, a.weight_cap, a.depth_cap);
    let mut b = e1;
    for n in 2..=a.weight_cap {
        let excess = adjoint_ihara(a, &b).tau_n(n);
        b = b.sub(&excess);
    }
    b
}

/// I_a = G o_Ad tau'(lambda) I_{a-1} with I_0 = e1: the Ad-side image of the
/// a-fold weighted Ihara iteration of a series whose Ad-series is G.
pub fn iterate_ad<S: Scalar>(a: u32, lambda: &S, g: &NCSeries<S>) -> NCSeries<S> {
    let mut acc = NCSeries::e1(g.proto(), g.n_roots, g.weight_cap, g.depth_cap);
    for _ in 0..a {
        acc = adjoint_ihara(g, &acc.tau_scale_ad(lambda));
    }
    acc
}

/// Sigma of the o_Ad inverse of I_a: the harmonic sums at lambda^a produced
/// by iterating the finite-level Ad-series `g` (at level lambda) a times.
pub fn iter_har_integral<S: Scalar>(a: u32, lambda: &S, g: &NCSeries<S>, lmax: usize) -> Result<NCSeries<S>> {
    if a == 0 {
        return Err(Error::Precondition("the iteration count must be positive".into()));
    }
    sigma_sum(&ad_inverse(&iterate_ad(a, lambda, g)), lmax)
}

/// The finite-level Ad-series G = A_inf o_Ad tau'(lambda) A_inf^{-1}.
pub fn finite_from_infinite<S: Scalar>(a_inf: &NCSeries<S>, lambda: &S) -> NCSeries<S> {
    adjoint_ihara(a_inf, &ad_inverse(a_inf).tau_scale_ad(lambda))
}

/// fixed_point_eval at each lambda.
pub fn comp_iter<S: Scalar>(a_inf: &NCSeries<S>, har_inf: &NCSeries<S>, lambdas: &[S]) -> Vec<NCSeries<S>> {
    lambdas.iter().map(|l| fixed_point_eval(a_inf, har_inf, l)).collect()
}

/// Depth-two Ad coefficients of Ad_Phi(e1) for Phi grouplike with Phi[e0] = Phi[e1] = 0,
/// N = 1, in terms of z_k = Phi[e0^{k-1} e1]:
/// A[e0^i e1 e0^j e1 e0^k] = [i=0] (-1)^k C(j+k,k) z_{j+k+1} + [k=0] (-1)^{j+1} C(i+j,i) z_{i+j+1}.
pub fn depth2_from_zetas<S: Scalar>(z: &dyn Fn(usize) -> S, i: usize, j: usize, k: usize, proto: &S) -> S {
    use crate::exact::rational::binomial;
    let mut acc = proto.zero_like();
    if i == 0 {
        let c = proto.from_rational_like(&crate::Rat::from_integer(binomial((j + k) as u64, k as u64)));
        let t = c * z(j + k + 1);
        acc = if k.is_multiple_of(2) { acc + t } else { acc - t };
    }
    if k == 0 {
        let c = proto.from_rational_like(&crate::Rat::from_integer(binomial((i + j) as u64, i as u64)));
        let t = c * z(i + j + 1);
        acc = if j % 2 == 1 { acc + t } else { acc - t };
    }
    acc
}

/// Splits e0^i e1 e0^j e1 e0^k into (i, j, k).
pub fn depth2_shape(w: &Word) -> Option<(usize, usize, usize)> {
    let pos: Vec<usize> = w.0.iter().enumerate().filter(|(_, l)| !l.is_e0()).map(|(i, _)| i).collect();
    if pos.len() != 2 || w.0.iter().any(|l| matches!(l, Letter::X(k) if *k != 0)) {
        return None;
    }
    Some((pos[0], pos[1] - pos[0] - 1, w.0.len() - pos[1] - 1))
}

/// Inverts comp_iter depth by depth: the Lambda^n coefficient at w is
/// A[e0^{n - wt(w)} embed(w)] plus contributions of lower depth, and the
/// Lambda^0 coefficient is har_inf(w) plus such contributions. Depth-two words
/// of A outside the embedded range are filled from the depth-one data (N = 1).
pub fn extract_triangular<S: Scalar>(
    expansions: &BTreeMap<HarmonicWord, ExpansionPoly<S>>,
    proto: &S,
    wcap: usize,
    dcap: usize,
) -> Result<(NCSeries<S>, NCSeries<S>)> {
    let mut a = NCSeries::e1(proto, 1, wcap, dcap);
    let mut har = harmonic_like(proto, 1, wcap, dcap);
    let words = harmonic_words(wcap, dcap, 1);
    for depth in 1..dcap {
        for w in words.iter().filter(|w| w.depth() == depth) {
            let e = w.embed(1);
            let exp = expansions
                .get(w)
                .ok_or_else(|| Error::Precondition(format!("missing expansion for {w}")))?;
            let cross = har_action_graded(&a, &har, std::slice::from_ref(w)).remove(w).unwrap_or_default();
            let wt = w.weight() as i64;
            let diff = |n: i64| {
                let x = exp.coeff(n, 0).cloned().unwrap_or_else(|| proto.zero_like());
                let y = cross.coeff(n, 0).cloned().unwrap_or_else(|| proto.zero_like());
                x - y
            };
            har.set(e.clone(), diff(0));
            for l in 0..=(wcap - e.weight()) {
                a.set(Word::e0_prefix(l, &e), diff(wt + l as i64));
            }
        }
        if depth == 1 {
            // z_k = -A[e0^{k-1} e1 e1]
            let snapshot = a.clone();
            let z = |k: usize| -snapshot.coeff(&Word::e0_prefix(k - 1, &Word(vec![Letter::X(0), Letter::X(0)])));
            for w in all_words(wcap, 2, 1) {
                if let Some((i, j, k)) = depth2_shape(&w) {
                    if k > 0 {
                        a.set(w, depth2_from_zetas(&z, i, j, k, proto));
                    }
                }
            }
        }
    }
    Ok((a, har))
}
