//! Random grouplike elements, built as exponentials of Lie polynomials.

use super::series::NCSeries;
use super::word::Letter;
use crate::exact::rational::rat2;
use crate::exact::ExactScalar;
use crate::scalar::Scalar;
use rand::Rng;

fn lie_bracket(a: &NCSeries<ExactScalar>, b: &NCSeries<ExactScalar>) -> NCSeries<ExactScalar> {
    a.concat_mul(b).sub(&b.concat_mul(a))
}

/// A random Lie monomial of the given weight, built from a random binary tree.
fn random_lie<R: Rng>(rng: &mut R, weight: usize, n_roots: u32, wcap: usize, dcap: usize) -> NCSeries<ExactScalar> {
    let proto = ExactScalar::int(n_roots, 0);
    if weight == 1 {
        let l = if rng.gen_bool(0.5) { Letter::E0 } else { Letter::X(rng.gen_range(0..n_roots) as u16) };
        return NCSeries::letter(&proto, n_roots, wcap, dcap, l);
    }
    let left = rng.gen_range(1..weight);
    lie_bracket(
        &random_lie(rng, left, n_roots, wcap, dcap),
        &random_lie(rng, weight - left, n_roots, wcap, dcap),
    )
}

/// exp of the series; `l` must have no term of weight 0.
pub fn exp_series(l: &NCSeries<ExactScalar>) -> NCSeries<ExactScalar> {
    let proto = l.proto().clone();
    let mut acc = NCSeries::one(&proto, l.n_roots, l.weight_cap, l.depth_cap);
    let mut power = acc.clone();
    for k in 1..=l.weight_cap {
        power = power.concat_mul(l).scale(&proto.from_rational_like(&rat2(1, k as i64)));
        if power.is_empty() {
            break;
        }
        acc = acc.add(&power);
    }
    acc.grouplike = true;
    acc
}

fn random_lie_element<R: Rng>(rng: &mut R, n_roots: u32, wcap: usize, dcap: usize, scale: i64, p: Option<u64>) -> NCSeries<ExactScalar> {
    let proto = ExactScalar::int(n_roots, 0);
    let mut lie = NCSeries::zero(&proto, n_roots, wcap, dcap);
    for w in (2..=wcap.max(2)).flat_map(|w| [w, w, w]) {
        let mono = random_lie(rng, w, n_roots, wcap, dcap);
        let num = rng.gen_range(-4i64..=4) * scale;
        let den = loop {
            let d = rng.gen_range(1i64..=3);
            if p.is_none_or(|p| d % p as i64 != 0) {
                break d;
            }
        };
        lie = lie.add(&mono.scale(&proto.from_rational_like(&rat2(num, den))));
    }
    lie
}

/// A random grouplike series with vanishing weight-1 part (an element of the
/// subgroup cut out by f[e0] = f[e_xi] = 0).
pub fn random_pi_tilde<R: Rng>(rng: &mut R, n_roots: u32, wcap: usize, dcap: usize) -> NCSeries<ExactScalar> {
    exp_series(&random_lie_element(rng, n_roots, wcap, dcap, 1, None))
}

/// A random grouplike series with p-integral coefficients: the Lie element has
/// coefficients divisible by p, so L^k/k! stays integral.
pub fn random_pi_tilde_integral<R: Rng>(rng: &mut R, n_roots: u32, wcap: usize, dcap: usize, p: u64) -> NCSeries<ExactScalar> {
    exp_series(&random_lie_element(rng, n_roots, wcap, dcap, p as i64, Some(p)))
}
