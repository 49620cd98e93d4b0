use mzv_core::exact::rational::{rat, rat2, val_rat};
use mzv_core::harmonic_integral::{canonical_section, har_action, har_action_at, harmonic_words, sigma_sum};
use mzv_core::ihara::ad_e1;
use mzv_core::linalg::{solve_exact, solve_square, LinearSolution};
use mzv_core::mhs::har;
use mzv_core::ncseries::random::random_pi_tilde;
use mzv_core::ncseries::{HarmonicWord, NCSeries};
use mzv_core::summation::{
    chain_sum_closed, engine, engine_block, engine_lmax, fit_expansion, geom_poly_sum, iter_har_series, truncation_certificate,
    ExpansionPoly, TermIndex,
};
use mzv_core::{Error, ExactScalar, PadicField, Rat, Scalar};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn q(n: i64) -> ExactScalar {
    ExactScalar::rational(rat(n))
}

fn hw(e: &[u32]) -> HarmonicWord {
    HarmonicWord::plain(e)
}

fn pow(t: &Rat, v: i64) -> Rat {
    (0..v).fold(rat(1), |acc, _| acc * t)
}

fn poly_at(a: &[Rat], v: i64) -> Rat {
    a.iter().rev().fold(rat(0), |acc, c| acc * rat(v) + c)
}

fn direct_chain(factors: &[(Rat, Vec<Rat>)], lo: i64, m: i64) -> Rat {
    let Some(((t, a), rest)) = factors.split_first() else { return rat(1) };
    (lo..m).map(|v| pow(t, v) * poly_at(a, v) * direct_chain(rest, v + 1, m)).sum()
}

#[test]
fn geometric_sums() {
    assert_eq!(geom_poly_sum(1, &rat(2)).eval(3), rat(10));
    assert_eq!(geom_poly_sum(2, &rat(3)).eval(4), rat(282));
    assert_eq!(geom_poly_sum(0, &rat(1)).eval(7), rat(7));
    assert_eq!(geom_poly_sum(2, &rat(1)).eval(5), rat(30));
    for alpha in 0..4u32 {
        for t in [rat(2), rat2(1, 2), rat(-3)] {
            for m in 0..8i64 {
                let direct: Rat = (0..m).map(|v| pow(&t, v) * pow(&rat(v), alpha as i64)).sum();
                assert_eq!(geom_poly_sum(alpha, &t).eval(m), direct);
            }
        }
    }
}

#[test]
fn chain_sums() {
    let two = (rat(2), vec![rat(1)]);
    assert_eq!(chain_sum_closed(&[two.clone(), two.clone()]).eval(4), rat(70));
    for t in [rat(2), rat(3), rat2(1, 2)] {
        let factors = [(t.clone(), vec![rat(1), rat(2)]), (rat(1), vec![rat(0), rat(0), rat(1)]), (t, vec![rat(-1)])];
        for d in 1..=3 {
            let closed = chain_sum_closed(&factors[..d]);
            for m in 0..=8 {
                assert_eq!(closed.eval(m), direct_chain(&factors[..d], 0, m), "d = {d}, M = {m}");
            }
        }
    }
}

#[test]
fn fit_round_trip() {
    // S(a) = 5 (3^a)^2 + a 3^a.
    let base = q(3);
    let samples: Vec<(i64, ExactScalar)> = (1..=8).map(|a| (a, q(5 * 9i64.pow(a as u32) + a * 3i64.pow(a as u32)))).collect();
    let e = fit_expansion(&samples, &base, 0..=2, 1).unwrap();
    assert_eq!(e.coeff(2, 0), Some(&q(5)));
    assert_eq!(e.coeff(1, 1), Some(&q(1)));
    assert_eq!(e.terms.len(), 2);
    assert_eq!(e.a_degree(), 1);
    assert_eq!(e.eval(&base, 11), q(5 * 9i64.pow(11) + 11 * 3i64.pow(11)));
    let back = ExpansionPoly::from_json(&e.to_json(), &base).unwrap();
    assert_eq!(back, e);
}

#[test]
fn fit_edge_cases() {
    let base = q(2);
    assert!(fit_expansion::<ExactScalar>(&[], &base, 0..=3, 1).unwrap().is_zero());
    let two = [(1, q(2)), (2, q(4))];
    assert!(matches!(fit_expansion(&two, &base, 0..=3, 0), Err(Error::Precondition(_))));
    // 1, 2, 4 fit 2^a; the fourth sample breaks it.
    let bad = [(0, q(1)), (1, q(2)), (2, q(4)), (3, q(9))];
    assert!(matches!(fit_expansion(&bad, &base, 0..=1, 0), Err(Error::Inconsistent(_))));
}

#[test]
fn linear_solvers() {
    let m = vec![vec![rat(2), rat(1), rat(5)], vec![rat(1), rat(3), rat(10)]];
    assert_eq!(solve_square(m), Some(vec![rat(1), rat(3)]));
    assert_eq!(solve_square(vec![vec![rat(1), rat(2), rat(1)], vec![rat(2), rat(4), rat(3)]]), None);
    let rows = |r: &[[i64; 3]]| r.iter().map(|row| row.iter().map(|&x| q(x)).collect::<Vec<_>>()).collect::<Vec<_>>();
    match solve_exact(rows(&[[1, 1, 3], [1, -1, 1], [2, 0, 4]]), 2) {
        LinearSolution::Unique(s) => assert_eq!(s, vec![q(2), q(1)]),
        other => panic!("{other:?}"),
    }
    assert!(matches!(solve_exact(rows(&[[1, 1, 3], [2, 2, 6]]), 2), LinearSolution::Underdetermined(_)));
    assert!(matches!(solve_exact(rows(&[[1, 1, 3], [1, 1, 4]]), 2), LinearSolution::Inconsistent(_)));
}

#[test]
fn engine_reproduces_brute_sums() {
    // Exact at a = 1; at a = 2 agreement holds to the block certificate.
    for w in [hw(&[1]), hw(&[2]), hw(&[1, 1]), hw(&[1, 2])] {
        for qq in [2u64, 3] {
            let lmax = 5;
            let e = engine(&w, qq, lmax).unwrap();
            assert_eq!(e.eval(&q(qq as i64), 1), har(qq, &w, 1));
            let diff = e.eval(&q(qq as i64), 2) - har(qq * qq, &w, 1);
            let cert = truncation_certificate(TermIndex::EngineBlock { weight: w.weight() as u32, s: lmax as u32 + 1 });
            if let Some(v) = diff.as_rational().and_then(|r| val_rat(r, qq)) {
                assert!(v >= cert, "{w} at Q = {qq}: v = {v} < {cert}");
            }
        }
    }
}

#[test]
fn iter_series_matches_prime_power_sum() {
    let x = iter_har_series(3, 2, 1, &hw(&[1]), 12).unwrap();
    assert!(x.prec >= 12);
    let field = PadicField::get(3, 1, 16).unwrap();
    let brute = field.embed(&har(9, &hw(&[1]), 1), 16).unwrap();
    assert!(x.agreement(&brute) >= 12);
    let y = iter_har_series(3, 1, 3, &hw(&[1, 1]), 10).unwrap();
    let brute = field.embed(&har(27, &hw(&[1, 1]), 1), 16).unwrap();
    assert!(y.agreement(&brute) >= 10);
    assert!(iter_har_series(3, 0, 1, &hw(&[1]), 8).is_err());
}

#[test]
fn certificate_bounds_true_valuation() {
    for w in [hw(&[1]), hw(&[2]), hw(&[1, 1])] {
        for ls in [vec![0usize], vec![1], vec![3], vec![0, 1], vec![2, 1]] {
            if ls.len() != w.depth() {
                continue;
            }
            let s: usize = ls.iter().sum();
            let cert = truncation_certificate(TermIndex::EngineBlock { weight: w.weight() as u32, s: s as u32 });
            let block = engine_block(&w, 3, &ls).unwrap();
            for a in 1..=3 {
                if let Some(v) = block.eval(&q(3), a).as_rational().and_then(|r| val_rat(r, 3)) {
                    assert!(v >= cert, "{w} ls = {ls:?} a = {a}");
                }
            }
        }
    }
    assert_eq!(engine_lmax(&hw(&[1]), 8), 6);
    assert_eq!(engine_lmax(&hw(&[4]), 2), 0);
}

fn harmonic_series(seed: u64, wcap: usize) -> NCSeries<ExactScalar> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = NCSeries::zero(&q(0), 1, wcap, 3);
    h.harmonic = true;
    for w in harmonic_words(wcap, 3, 1) {
        h.set(w.embed(1), ExactScalar::rational(rat2(rng.gen_range(-20..=20), rng.gen_range(1..=6))));
    }
    h
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn sigma_inverts_section(seed in any::<u64>()) {
        let h = harmonic_series(seed, 5);
        let back = sigma_sum(&canonical_section(&h).with_caps(5, 3), 0).unwrap();
        for w in harmonic_words(5, 3, 1) {
            prop_assert_eq!(back.harmonic_coeff(&w), h.harmonic_coeff(&w));
        }
    }

    #[test]
    fn action_at_one_is_the_action(seed in any::<u64>()) {
        let g = ad_e1(&random_pi_tilde(&mut ChaCha8Rng::seed_from_u64(seed), 1, 6, 3));
        let h = harmonic_series(seed ^ 1, 6);
        let a = har_action(&g, &h, 2).unwrap();
        let b = har_action_at(&q(1), &g, &h, 2).unwrap();
        prop_assert!(a.sub(&b).terms().all(|(_, c)| c.is_zero()));
    }

    #[test]
    fn unit_series_acts_trivially(seed in any::<u64>()) {
        let e1 = NCSeries::e1(&q(0), 1, 6, 3);
        let h = harmonic_series(seed, 6);
        let out = har_action(&e1, &h, 1).unwrap();
        for w in harmonic_words(5, 3, 1).into_iter().filter(|w| w.weight() >= 2) {
            prop_assert_eq!(out.harmonic_coeff(&w), h.harmonic_coeff(&w));
        }
    }
}
