//! The Ihara product, its adjoint form, weighted actions, fixed points and iteration.

use crate::error::{Error, Result};
use crate::ncseries::{norm_ld, NCSeries, Letter, Word};
use crate::scalar::Scalar;
use std::collections::BTreeMap;

/// Caps and N of two operands must agree.
fn check_caps<S: Scalar>(a: &NCSeries<S>, b: &NCSeries<S>) -> Result<()> {
    if a.n_roots != b.n_roots || a.weight_cap != b.weight_cap || a.depth_cap != b.depth_cap {
        return Err(Error::CapMismatch(format!(
            "(N, W, D) = ({}, {}, {}) vs ({}, {}, {})",
            a.n_roots, a.weight_cap, a.depth_cap, b.n_roots, b.weight_cap, b.depth_cap
        )));
    }
    Ok(())
}

/// f(e0, (images[k])_k): letterwise substitution, e0 fixed.
pub fn substitute<S: Scalar>(f: &NCSeries<S>, images: &[NCSeries<S>]) -> NCSeries<S> {
    let wcap = f.weight_cap;
    let dcap = f.depth_cap;
    let min_w = images.iter().flat_map(|s| s.terms().map(|(w, _)| w.weight())).min().unwrap_or(1).max(1);
    let min_d = images.iter().flat_map(|s| s.terms().map(|(w, _)| w.depth())).min().unwrap_or(0);
    let terms: Vec<(&[Letter], S)> = f.terms().map(|(w, c)| (w.0.as_slice(), c.clone())).collect();
    let mut out = subst_rec(f, &terms, images, wcap, dcap, min_w, min_d);
    out.weight_cap = wcap;
    out.depth_cap = dcap;
    out
}

fn subst_rec<S: Scalar>(
    like: &NCSeries<S>,
    terms: &[(&[Letter], S)],
    images: &[NCSeries<S>],
    wcap: usize,
    dcap: usize,
    min_w: usize,
    min_d: usize,
) -> NCSeries<S> {
    let mut out = NCSeries::zero(like.proto(), like.n_roots, wcap, dcap);
    let mut groups: BTreeMap<Letter, Vec<(&[Letter], S)>> = BTreeMap::new();
    for (w, c) in terms {
        match w.split_first() {
            None => out.add_term(Word::empty(), c.clone()),
            Some((l, rest)) => groups.entry(*l).or_default().push((rest, c.clone())),
        }
    }
    for (l, sub) in groups {
        match l {
            Letter::E0 => {
                if wcap == 0 {
                    continue;
                }
                let inner = subst_rec(like, &sub, images, wcap - 1, dcap, min_w, min_d);
                for (w, c) in inner.terms() {
                    out.add_term(Word::e0_prefix(1, w), c.clone());
                }
            }
            Letter::X(k) => {
                if wcap < min_w || dcap < min_d {
                    continue;
                }
                let inner = subst_rec(like, &sub, images, wcap - min_w, dcap - min_d, min_w, min_d);
                let img = images[k as usize].truncate(wcap, dcap);
                let prod = img.concat_mul(&inner.with_caps(wcap, dcap));
                for (w, c) in prod.terms() {
                    out.add_term(w.clone(), c.clone());
                }
            }
        }
    }
    out
}

/// Adjoint Ihara action h o_Ad f = f(e0, (h^{(x)})_x).
pub fn adjoint_ihara<S: Scalar>(h: &NCSeries<S>, f: &NCSeries<S>) -> NCSeries<S> {
    let images: Vec<NCSeries<S>> = (0..f.n_roots as i64).map(|k| h.xi_twist(k)).collect();
    let mut out = substitute(f, &images);
    out.grouplike = false;
    out
}

/// Ad_f(e1) = f^{-1} e1 f.
pub fn ad_e1<S: Scalar>(f: &NCSeries<S>) -> NCSeries<S> {
    let e1 = NCSeries::e1(f.proto(), f.n_roots, f.weight_cap, f.depth_cap);
    let inv = f.inverse().expect("grouplike series have constant term 1");
    let mut out = inv.concat_mul(&e1).concat_mul(f);
    out.grouplike = false;
    out
}

/// g o f = g(e0, e_xi) f(e0, g^{(xi)-1} e_xi g^{(xi)}).
pub fn ihara_mul<S: Scalar>(g: &NCSeries<S>, f: &NCSeries<S>) -> Result<NCSeries<S>> {
    check_caps(g, f)?;
    let a = ad_e1(g);
    let mut out = g.concat_mul(&adjoint_ihara(&a, f));
    out.grouplike = g.grouplike && f.grouplike;
    Ok(out)
}

/// The inverse for o, solved weight by weight from g o h = 1.
pub fn ihara_inv<S: Scalar>(g: &NCSeries<S>) -> NCSeries<S> {
    let a = ad_e1(g);
    let target = g.inverse().expect("grouplike series have constant term 1");
    let mut h = NCSeries::one(g.proto(), g.n_roots, g.weight_cap, g.depth_cap);
    for n in 1..=g.weight_cap {
        let partial = adjoint_ihara(&a, &h).tau_n(n);
        let step = target.tau_n(n).sub(&partial);
        h = h.add(&step);
    }
    h.grouplike = g.grouplike;
    h
}

/// lambda-weighted action f -> g o tau(lambda) f.
pub fn weighted_ihara<S: Scalar>(lambda: &S, g: &NCSeries<S>, f: &NCSeries<S>) -> Result<NCSeries<S>> {
    if lambda.is_zero() {
        return Err(Error::Precondition("weight lambda must be nonzero".into()));
    }
    ihara_mul(g, &f.tau_scale(lambda))
}

/// Inverse of the weighted action: f -> tau(1/lambda)(g^{-1} o f).
pub fn weighted_ihara_inv<S: Scalar>(lambda: &S, g: &NCSeries<S>, f: &NCSeries<S>) -> Result<NCSeries<S>> {
    let inv = lambda.inv().ok_or_else(|| Error::Precondition("weight lambda must be nonzero".into()))?;
    Ok(ihara_mul(&ihara_inv(g), f)?.tau_scale(&inv))
}

/// The fixed point of f -> g o tau(lambda) f, solved triangularly: the weight-n
/// part is divided by the unit 1 - lambda^n.
pub fn fixed_point<S: Scalar>(lambda: &S, g: &NCSeries<S>, p: u64) -> Result<NCSeries<S>> {
    if lambda.valuation(p).is_none_or(|v| v < 1) {
        return Err(Error::Precondition("fixed point needs |lambda|_p < 1".into()));
    }
    let a = ad_e1(g);
    let one = g.proto().one_like();
    let mut fix = NCSeries::one(g.proto(), g.n_roots, g.weight_cap, g.depth_cap);
    let mut lam_n = one.clone();
    for n in 1..=g.weight_cap {
        lam_n = lam_n * lambda.clone();
        let rhs = g.concat_mul(&adjoint_ihara(&a, &fix.tau_scale(lambda))).tau_n(n);
        let inv = (one.clone() - lam_n.clone()).inv().expect("1 - lambda^n is a unit");
        fix = fix.add(&rhs.scale(&inv));
    }
    fix.grouplike = g.grouplike;
    Ok(fix)
}

/// a-fold iteration: iterate(a) = g o tau(lambda) iterate(a - 1), iterate(0) = 1.
pub fn iterate<S: Scalar>(a: u64, lambda: &S, g: &NCSeries<S>) -> Result<NCSeries<S>> {
    let mut acc = NCSeries::one(g.proto(), g.n_roots, g.weight_cap, g.depth_cap);
    for _ in 0..a {
        acc = weighted_ihara(lambda, g, &acc)?;
    }
    acc.grouplike = g.grouplike;
    Ok(acc)
}

/// The contraction inequality N(apply(f2)^{-1} o apply(f1)) <= N(f2^{-1} o f1)(kappa Lambda),
/// coefficientwise, where v_p(kappa) = vk.
pub fn contraction_check<S: Scalar>(
    apply: impl Fn(&NCSeries<S>) -> Result<NCSeries<S>>,
    f1: &NCSeries<S>,
    f2: &NCSeries<S>,
    vk: i64,
    p: u64,
) -> Result<bool> {
    let (lhs, rhs) = contraction_sides(apply, f1, f2, vk, p)?;
    Ok(lhs.le(&rhs))
}

/// Both sides of the contraction inequality.
pub fn contraction_sides<S: Scalar>(
    apply: impl Fn(&NCSeries<S>) -> Result<NCSeries<S>>,
    f1: &NCSeries<S>,
    f2: &NCSeries<S>,
    vk: i64,
    p: u64,
) -> Result<(crate::ncseries::NormPoly, crate::ncseries::NormPoly)> {
    let (a1, a2) = (apply(f1)?, apply(f2)?);
    let lhs = norm_ld(&ihara_mul(&ihara_inv(&a2), &a1)?, p);
    let rhs = norm_ld(&ihara_mul(&ihara_inv(f2), f1)?, p).scale_lambda(vk);
    Ok((lhs, rhs))
}
