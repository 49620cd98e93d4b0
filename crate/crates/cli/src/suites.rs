//! The `verify` suites. Each returns its checks in a fixed order.

use crate::report::Check;
use crate::Config;
use mzv_core::exact::rational::rat2;
use mzv_core::harmonic_integral::harmonic_words;
use mzv_core::ihara::{ad_e1, adjoint_ihara, contraction_sides, fixed_point, ihara_inv, ihara_mul, iterate, weighted_ihara};
use mzv_core::mhs::{mhs_prefix_rational, mhs_unweighted, split_by_digits};
use mzv_core::ncseries::random::{random_pi_tilde, random_pi_tilde_integral};
use mzv_core::ncseries::word::all_words;
use mzv_core::ncseries::{norm_ld, stuffle_set, HarmonicWord, NCSeries};
use mzv_core::summation::fit_expansion;
use mzv_core::zeta::{ad_infinity_coeff, verify_three_way};
use mzv_core::{ExactScalar, PadicField, PadicScalar, Rat, Result, Scalar};
use num_bigint::BigInt;
use num_integer::Integer;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::sync::Arc;

type Series = NCSeries<ExactScalar>;

fn q(n: i64) -> ExactScalar {
    ExactScalar::rational(Rat::from_integer(BigInt::from(n)))
}

fn same<S: Scalar>(a: &NCSeries<S>, b: &NCSeries<S>) -> bool {
    a.sub(b).terms().all(|(_, c)| c.is_zero())
}

fn words_up_to(weight: usize, depth: usize) -> Vec<HarmonicWord> {
    harmonic_words(weight + 1, depth + 1, 1).into_iter().filter(|w| w.weight() <= weight).collect()
}

fn rng(cfg: &Config) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed)
}

fn samples(cfg: &Config) -> Vec<Series> {
    let mut r = rng(cfg);
    (0..cfg.samples).map(|_| random_pi_tilde(&mut r, 1, cfg.weight_cap, cfg.depth_cap)).collect()
}

/// One check per property; it records the first sample that breaks it.
fn tally(names: &[&str], fails: &[Option<usize>], n: usize) -> Vec<Check> {
    names
        .iter()
        .zip(fails)
        .map(|(name, f)| match f {
            Some(i) => Check::new(*name, false, format!("fails on sample {i}")),
            None => Check::new(*name, true, format!("{n} samples, exact")),
        })
        .collect()
}

/// sum_k lambda^k op(tau_{k + shift} x)
fn graded(x: &Series, lambda: &ExactScalar, shift: usize, op: impl Fn(&Series) -> Series) -> Series {
    let mut acc = x.empty_like();
    for k in 0..=x.weight_cap.saturating_sub(shift) {
        acc = acc.add(&op(&x.tau_n(k + shift)).scale(&lambda.pow(k as u64)));
    }
    acc
}

fn to_padic(f: &Series, field: &Arc<PadicField>, prec: i64) -> Result<NCSeries<PadicScalar>> {
    let mut out = NCSeries::zero(&field.zero(prec), f.n_roots, f.weight_cap, f.depth_cap);
    for (w, c) in f.terms() {
        out.set(w.clone(), field.embed(c, prec)?);
    }
    out.grouplike = f.grouplike;
    Ok(out)
}

/// har(m, u) har(m, v) = sum over the stuffle of u and v, on integers
/// har(m, w) m^wt lcm(1..m)^wt.
pub fn stuffle(max_m: u64, max_weight: usize) -> Vec<Check> {
    let mut lcm = vec![BigInt::from(1); max_m as usize + 1];
    for m in 2..=max_m as usize {
        lcm[m] = lcm[m - 1].lcm(&BigInt::from(m));
    }
    let mut tables: HashMap<HarmonicWord, Vec<BigInt>> = HashMap::new();
    let mut table = |w: &HarmonicWord| -> Vec<BigInt> {
        tables
            .entry(w.clone())
            .or_insert_with(|| {
                let h = mhs_prefix_rational(w, max_m);
                let wt = w.weight() as u32;
                (0..=max_m as usize)
                    .map(|m| (&h[m] * Rat::from_integer(BigInt::from(m).pow(wt) * lcm[m].pow(wt))).to_integer())
                    .collect()
            })
            .clone()
    };
    let base = words_up_to(max_weight, max_weight);
    let mut out = Vec::new();
    for (i, u) in base.iter().enumerate() {
        for v in &base[i..] {
            let (hu, hv) = (table(u), table(v));
            let terms: Vec<Vec<BigInt>> = stuffle_set(u, v, 1).iter().map(&mut table).collect();
            let bad = (1..=max_m as usize).find(|&m| &hu[m] * &hv[m] != terms.iter().map(|t| &t[m]).sum::<BigInt>());
            let detail = match bad {
                Some(m) => format!("fails at m = {m}"),
                None => format!("exact for m <= {max_m}"),
            };
            out.push(Check::new(format!("stuffle {u} * {v}"), bad.is_none(), detail));
        }
    }
    out
}

pub fn splitting(cfg: &Config, max_m: u64, max_weight: usize) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for w in words_up_to(max_weight, cfg.depth_cap.min(2)) {
        let mut cert = i64::MAX;
        let mut bad = None;
        for m in 2..=max_m {
            let s = split_by_digits(m, &w, cfg.p, cfg.p, cfg.precision)?;
            let b = s.field.embed(&mhs_unweighted(m, &w, 1), s.prec + 4)?;
            cert = cert.min(s.prec);
            if s.prec < cfg.precision || s.agreement(&b) < s.prec {
                bad = Some(m);
                break;
            }
        }
        let detail = match bad {
            Some(m) => format!("disagrees with brute force at m = {m}"),
            None => format!("2 <= m <= {max_m}"),
        };
        out.push(Check::new(format!("split {w}"), bad.is_none(), detail).with_cert(cert));
    }
    Ok(out)
}

pub fn group(cfg: &Config) -> Result<Vec<Check>> {
    let gs = samples(cfg);
    let n = gs.len();
    let one = NCSeries::one(&q(0), 1, cfg.weight_cap, cfg.depth_cap);
    let lambdas = [q(2), ExactScalar::rational(rat2(-1, 3)), q(5)];
    let mut fails = [None; 6];
    for i in 0..n {
        let (g, f, h) = (&gs[i], &gs[(i + 1) % n], &gs[(i + 2) % n]);
        let gi = ihara_inv(g);
        let (ag, af) = (ad_e1(g), ad_e1(f));
        let mut ok = [
            same(&ihara_mul(&ihara_mul(g, f)?, h)?, &ihara_mul(g, &ihara_mul(f, h)?)?),
            same(&ihara_mul(&one, g)?, g) && same(&ihara_mul(g, &one)?, g),
            same(&ihara_mul(g, &gi)?, &one) && same(&ihara_mul(&gi, g)?, &one),
            true,
            true,
            true,
        ];
        for lam in &lambdas {
            ok[3] &= same(&ihara_mul(g, &f.tau_scale(lam))?, &graded(f, lam, 0, |x| ihara_mul(g, x).expect("same caps")));
            ok[4] &= same(&ad_e1(&f.tau_scale(lam)), &graded(&af, lam, 1, |x| x.clone()));
            ok[5] &= same(&adjoint_ihara(&ag, &af.tau_scale_ad(lam)), &graded(&af, lam, 1, |x| adjoint_ihara(&ag, x)));
        }
        for (k, good) in ok.into_iter().enumerate() {
            if !good && fails[k].is_none() {
                fails[k] = Some(i);
            }
        }
    }
    let names = ["associativity", "unit", "inverse", "semidirect identity 1", "semidirect identity 2", "semidirect identity 3"];
    Ok(tally(&names, &fails, n))
}

pub fn norms(cfg: &Config) -> Result<Vec<Check>> {
    let gs = samples(cfg);
    let n = gs.len();
    let p = cfg.p;
    let lam = q(p as i64);
    let mut fails = [None; 4];
    for i in 0..n {
        let (g, f) = (&gs[i], &gs[(i + 1) % n]);
        let (ng, nf) = (norm_ld(g, p), norm_ld(f, p));
        let mut tau_bound = true;
        for l in [q(1), q(p as i64), q(-9)] {
            tau_bound &= norm_ld(&ad_e1(&ihara_mul(g, &f.tau_scale(&l))?), p).le(&ng.mul(&nf).shift(1, 1));
        }
        let ok = [
            norm_ld(&ihara_mul(g, f)?, p).le(&ng.mul(&nf)),
            norm_ld(&ad_e1(g), p).le(&ng.shift(1, 1)),
            tau_bound,
            norm_ld(&fixed_point(&lam, g, p)?, p) == ng
                && norm_ld(&iterate(3, &lam, g)?, p) == ng
                && norm_ld(&ihara_inv(g), p) == ng,
        ];
        for (k, good) in ok.into_iter().enumerate() {
            if !good && fails[k].is_none() {
                fails[k] = Some(i);
            }
        }
    }
    let names = ["submultiplicativity", "Ad norm bound", "Ad of weighted product bound", "N(fix) = N(iter) = N(inv) = N(g)"];
    Ok(tally(&names, &fails, n))
}

pub fn contraction(cfg: &Config) -> Result<Vec<Check>> {
    let mut r = rng(cfg);
    let p = cfg.p;
    let (w, d) = (cfg.weight_cap, cfg.depth_cap);
    let lam = q(p as i64);
    let mut bad = None;
    for i in 0..cfg.samples {
        let g = random_pi_tilde(&mut r, 1, w, d);
        let (f1, f2) = (random_pi_tilde(&mut r, 1, w, d), random_pi_tilde(&mut r, 1, w, d));
        let (lhs, rhs) = contraction_sides(|f| weighted_ihara(&lam, &g, f), &f1, &f2, 1, p)?;
        if lhs != rhs {
            bad = Some(i);
            break;
        }
    }
    let mut out = vec![Check::new(
        "equality at kappa = lambda",
        bad.is_none(),
        bad.map_or(format!("{} pairs", cfg.samples), |i| format!("fails on pair {i}")),
    )];
    // Iterates of an integral g converge to the fixed point mod p^prec after prec steps.
    let prec = cfg.precision;
    let field = PadicField::get(p, 1, prec)?;
    let lam = field.from_int(p as i64, prec);
    let mut bad = None;
    for i in 0..cfg.samples.min(5) {
        let g = to_padic(&random_pi_tilde_integral(&mut r, 1, w, d, p), &field, prec)?;
        let fix = fixed_point(&lam, &g, p)?;
        let mut f = NCSeries::one(g.proto(), 1, w, d);
        for _ in 0..prec {
            f = weighted_ihara(&lam, &g, &f)?;
        }
        if !same(&fix, &f) {
            bad = Some(i);
            break;
        }
    }
    out.push(
        Check::new(
            "fixed point = iterates",
            bad.is_none(),
            bad.map_or(format!("{prec} iterates"), |i| format!("sample {i} differs")),
        )
        .with_cert(prec),
    );
    Ok(out)
}

pub fn iter_structure(cfg: &Config) -> Result<Vec<Check>> {
    let mut r = rng(cfg);
    let lam = q(cfg.p as i64);
    let dmax = cfg.depth_cap.min(2);
    let g = random_pi_tilde(&mut r, 1, cfg.weight_cap, dmax);
    let mut out = Vec::new();
    // Fits use a = d+1..d+k with k = max(6, weight + 1) samples and predict the next two.
    let k = 6.max(cfg.weight_cap + 1);
    for d in 1..=dmax {
        let iterates: Vec<Series> = (1..=(d + k + 2) as u64).map(|a| iterate(a, &lam, &g)).collect::<Result<_>>()?;
        for w in all_words(cfg.weight_cap, d, 1).into_iter().filter(|w| w.depth() == d) {
            let s: Vec<(i64, ExactScalar)> = (d + 1..=d + k + 2).map(|a| (a as i64, iterates[a - 1].coeff(&w))).collect();
            let name = format!("iterate [{w}]");
            out.push(match fit_expansion(&s[..k], &lam, 0..=w.weight() as i64, 0) {
                Ok(fit) => {
                    let ok = s[k..].iter().all(|(a, v)| fit.eval(&lam, *a) == *v);
                    Check::new(name, ok, if ok { format!("fit on {k} values predicts the next two") } else { "prediction fails".into() })
                }
                Err(e) => Check::new(name, false, e.to_string()),
            });
        }
    }
    Ok(out)
}

pub fn three_way(cfg: &Config, words: &[HarmonicWord]) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for w in words {
        for rep in verify_three_way(cfg.p, w, cfg.alpha0, &cfg.alpha, cfg.precision)? {
            let cert = rep.legs.iter().map(|l| l.cert).min().unwrap_or(0);
            let detail = match rep.pairs.iter().min_by_key(|x| x.2 - x.3) {
                Some((a, b, got, _)) => format!("closest pair {a} / {b}: {got} digits"),
                None => String::new(),
            };
            out.push(Check::new(format!("three-way {w} alpha={}", rep.alpha), rep.pass, detail).with_cert(cert));
        }
    }
    Ok(out)
}

/// ad_infinity_coeff at alpha0 against the first entry of --alpha.
pub fn cross_alpha(cfg: &Config) -> Result<Vec<Check>> {
    let other = cfg.alpha.first().copied().unwrap_or(2);
    let mut out = Vec::new();
    for k in 1..=cfg.weight_cap as u64 {
        for b in 0..k {
            let n = k - b;
            let x = ad_infinity_coeff(cfg.p, b, n, cfg.alpha0, cfg.precision)?;
            let y = ad_infinity_coeff(cfg.p, b, n, other, cfg.precision)?;
            let need = x.prec.min(y.prec);
            let got = x.agreement(&y);
            out.push(
                Check::new(
                    format!("A[e0^{b} e1 e0^{} e1] alpha0 = {} vs {other}", n - 1, cfg.alpha0),
                    got >= need && need >= cfg.precision,
                    format!("agreement {got}"),
                )
                .with_cert(need),
            );
        }
    }
    Ok(out)
}
