use mzv_core::exact::rational::{rat, rat2};
use mzv_core::ncseries::random::{exp_series, random_pi_tilde};
use mzv_core::ncseries::word::all_words;
use mzv_core::ncseries::{norm_ld, shuffle_set, stuffle_set, HarmonicWord, Letter, NCSeries, Word};
use mzv_core::{ExactScalar, Scalar};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Series = NCSeries<ExactScalar>;

fn q(n: i64) -> ExactScalar {
    ExactScalar::rational(rat(n))
}

fn w(s: &str) -> Word {
    Word::parse(s, 1).unwrap()
}

fn series(terms: &[(&str, i64)], wcap: usize, dcap: usize) -> Series {
    let mut f = NCSeries::zero(&q(0), 1, wcap, dcap);
    for (s, c) in terms {
        f.add_term(w(s), q(*c));
    }
    f
}

fn same(a: &Series, b: &Series) -> bool {
    a.sub(b).terms().all(|(_, c)| c.is_zero())
}

/// Random series with p-adically varied rational coefficients on every word.
fn random_series(seed: u64, n_roots: u32, wcap: usize, dcap: usize) -> Series {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = NCSeries::zero(&ExactScalar::int(n_roots, 0), n_roots, wcap, dcap);
    for word in all_words(wcap, dcap, n_roots) {
        if rng.gen_bool(0.6) {
            let c = rat2(rng.gen_range(-9..=9) * 3i64.pow(rng.gen_range(0..3)), [1, 2, 3, 9][rng.gen_range(0..4)]);
            f.set(word, ExactScalar::from_rational(n_roots, c));
        }
    }
    f
}

#[test]
fn word_text_form() {
    assert_eq!(w("0 x0 0").to_string(), "0 x0 0");
    assert_eq!(w("011"), w("0 x0 x0"));
    assert_eq!(Word::parse("x5 0", 4).unwrap().0, vec![Letter::X(1), Letter::E0]);
    assert!(Word::parse("y1", 1).is_err());
    let hw = HarmonicWord::parse("(2,1)/(0,1,3)").unwrap();
    assert_eq!(hw.to_string(), "(2,1)/(0,1,3)");
    assert_eq!(hw.embed(4).to_string(), "x3 x1 0 x0");
    assert_eq!(HarmonicWord::from_word(&hw.embed(4)), Some(hw));
    assert!(HarmonicWord::parse("(1,2)/(0,0)").is_err());
}

#[test]
fn concat_examples() {
    let f = series(&[("", 1), ("0", 1)], 4, 4);
    let g = series(&[("", 1), ("x0", 1)], 4, 4);
    assert_eq!(f.concat_mul(&g), series(&[("", 1), ("0", 1), ("x0", 1), ("0 x0", 1)], 4, 4));
    let one = NCSeries::one(&q(0), 1, 4, 4);
    assert_eq!(f.concat_mul(&one), f);
    let h = series(&[("", 1), ("0", -1), ("0 0", 1)], 4, 4);
    assert!(same(&f.concat_mul(&h), &series(&[("", 1), ("0 0 0", 1)], 4, 4)));
}

#[test]
fn shuffle_and_stuffle_examples() {
    let mut s = shuffle_set(&w("0"), &w("x0"));
    s.sort();
    let mut want = vec![w("0 x0"), w("x0 0")];
    want.sort();
    assert_eq!(s, want);
    let mut st = stuffle_set(&HarmonicWord::plain(&[1]), &HarmonicWord::plain(&[2]), 1);
    st.sort();
    let mut want = vec![HarmonicWord::plain(&[1, 2]), HarmonicWord::plain(&[2, 1]), HarmonicWord::plain(&[3])];
    want.sort();
    assert_eq!(st, want);
    let mut st = stuffle_set(&HarmonicWord::plain(&[1]), &HarmonicWord::plain(&[1]), 1);
    st.sort();
    assert_eq!(st, vec![HarmonicWord::plain(&[1, 1]), HarmonicWord::plain(&[1, 1]), HarmonicWord::plain(&[2])]);
}

#[test]
fn inverse_examples() {
    let one = NCSeries::one(&q(0), 1, 5, 5);
    assert_eq!(one.inverse().unwrap(), one);
    let f = series(&[("", 1), ("x0", 1)], 5, 5);
    let want = series(&[("", 1), ("x0", -1), ("x0 x0", 1), ("x0 x0 x0", -1), ("x0 x0 x0 x0", 1), ("x0 x0 x0 x0 x0", -1)], 5, 5);
    assert!(same(&f.inverse().unwrap(), &want));
    assert!(series(&[("x0", 1)], 3, 3).inverse().is_err());
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let g = random_pi_tilde(&mut rng, 1, 5, 3);
    let gi = g.inverse().unwrap();
    assert_eq!(gi.coeff(&w("0 x0")), g.coeff(&w("x0 0")));
    assert!(same(&gi, &g.antipode()));
}

#[test]
fn tau_examples() {
    let f = series(&[("", 1), ("0", 2), ("0 x0", 3)], 4, 4);
    assert_eq!(f.tau_scale(&q(1)), f);
    assert_eq!(f.tau_scale(&q(5)).coeff(&w("0 x0")), q(75));
    assert!(same(&f.tau_n(1), &series(&[("0", 2)], 4, 4)));
    assert!(same(&f.tau_depth_le(0), &series(&[("", 1), ("0", 2)], 4, 4)));
}

#[test]
fn xi_twist_examples() {
    let f = random_series(3, 1, 4, 3);
    assert_eq!(f.xi_twist(1), f);
    let g = random_series(4, 4, 3, 2);
    assert!(same(&g.xi_twist(1).xi_twist(-1), &g));
    let e = NCSeries::letter(&ExactScalar::int(4, 0), 4, 3, 3, Letter::X(1));
    assert!(same(&e.xi_twist(1), &NCSeries::letter(&ExactScalar::int(4, 0), 4, 3, 3, Letter::X(2))));
}

#[test]
fn norm_examples() {
    let mut f = NCSeries::zero(&q(0), 1, 3, 3);
    f.set(w("0"), q(3));
    f.set(w("x0"), q(1));
    let n = norm_ld(&f, 3);
    assert_eq!(n.entry(1, 0), rat2(1, 3));
    assert_eq!(n.entry(1, 1), rat(1));
    assert!(norm_ld(&NCSeries::zero(&q(0), 1, 3, 3), 3).entries.is_empty());
    // tau(lambda) scales entry (n, d) by |lambda|^n.
    let g = random_series(5, 1, 4, 3);
    let (ng, nt) = (norm_ld(&g, 3), norm_ld(&g.tau_scale(&q(9)), 3));
    for (&(wt, d), c) in &ng.entries {
        assert_eq!(nt.entry(wt, d), c * rat2(1, 9i64.pow(wt as u32)));
    }
}

#[test]
fn harmonic_projection() {
    let f = series(&[("0 x0", 2), ("x0 x0", 5), ("x0 0 x0", 7)], 4, 4);
    let h = f.harmonic_project();
    assert!(h.harmonic);
    assert_eq!(h.coeff(&w("0 x0")), q(0));
    assert_eq!(h.harmonic_coeff(&HarmonicWord::plain(&[1])), q(5));
    assert_eq!(h.harmonic_coeff(&HarmonicWord::plain(&[2])), q(7));
    assert_eq!(h.harmonic_project(), h);
}

#[test]
fn grouplike_check_with_negative_control() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..5 {
        let mut g = random_pi_tilde(&mut rng, 1, 5, 3);
        assert!(g.check_grouplike());
        let (word, c) = g.terms().find(|(w, c)| w.weight() >= 2 && !c.is_zero()).map(|(w, c)| (w.clone(), c.clone())).unwrap();
        g.set(word, c + q(1));
        assert!(!g.check_grouplike());
    }
    let lie = series(&[("0", 2), ("x0", -1)], 4, 4);
    assert!(exp_series(&lie).check_grouplike());
}

#[test]
fn json_round_trip() {
    let f = random_series(7, 3, 3, 2);
    let back = NCSeries::from_json(&f.to_json(Some(7)), &ExactScalar::int(3, 0)).unwrap();
    assert!(same(&f, &back));
    let v = f.to_json(None);
    assert_eq!(v["scalar"], "exact");
    assert_eq!(v["N"], 3);
}

#[test]
fn binary_ops_truncate_to_smaller_caps() {
    let a = random_series(1, 1, 3, 3);
    let b = random_series(2, 1, 4, 2);
    let s = a.try_add(&b).unwrap();
    assert_eq!((s.weight_cap, s.depth_cap), (3, 2));
    assert!(s.terms().all(|(w, _)| w.weight() <= 3 && w.depth() <= 2));
    assert_eq!(a.concat_mul(&b).weight_cap, 3);
    // Different N is an error.
    let c = random_series(3, 3, 3, 3);
    assert!(a.try_add(&c).is_err());
    assert!(a.try_concat_mul(&c).is_err());
}

fn hw() -> impl Strategy<Value = HarmonicWord> {
    proptest::collection::vec(1u32..=3, 1..=2).prop_map(|e| HarmonicWord::plain(&e))
}

fn word() -> impl Strategy<Value = Word> {
    proptest::collection::vec(prop_oneof![Just(Letter::E0), Just(Letter::X(0))], 0..=3).prop_map(Word)
}

fn sorted<T: Ord>(mut v: Vec<T>) -> Vec<T> {
    v.sort();
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn shuffle_commutative_associative(u in word(), v in word(), x in word()) {
        prop_assert_eq!(sorted(shuffle_set(&u, &v)), sorted(shuffle_set(&v, &u)));
        let left: Vec<Word> = shuffle_set(&u, &v).iter().flat_map(|a| shuffle_set(a, &x)).collect();
        let right: Vec<Word> = shuffle_set(&v, &x).iter().flat_map(|b| shuffle_set(&u, b)).collect();
        prop_assert_eq!(sorted(left), sorted(right));
    }

    #[test]
    fn stuffle_commutative_associative(u in hw(), v in hw(), x in hw()) {
        prop_assert_eq!(sorted(stuffle_set(&u, &v, 1)), sorted(stuffle_set(&v, &u, 1)));
        let left: Vec<HarmonicWord> = stuffle_set(&u, &v, 1).iter().flat_map(|a| stuffle_set(a, &x, 1)).collect();
        let right: Vec<HarmonicWord> = stuffle_set(&v, &x, 1).iter().flat_map(|b| stuffle_set(&u, b, 1)).collect();
        prop_assert_eq!(sorted(left), sorted(right));
    }

    #[test]
    fn concat_submultiplicative(a in any::<u64>(), b in any::<u64>()) {
        let (f, g) = (random_series(a, 1, 4, 3), random_series(b, 1, 4, 3));
        prop_assert!(norm_ld(&f.concat_mul(&g), 3).le(&norm_ld(&f, 3).mul(&norm_ld(&g, 3))));
    }

    #[test]
    fn inverse_round_trip(seed in any::<u64>()) {
        let mut f = random_series(seed, 1, 4, 3);
        f.set(Word::empty(), q(1));
        let one = NCSeries::one(&q(0), 1, 4, 3);
        let fi = f.inverse().unwrap();
        prop_assert!(same(&f.concat_mul(&fi), &one));
        prop_assert!(same(&fi.concat_mul(&f), &one));
    }

    #[test]
    fn concat_associative(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (f, g, h) = (random_series(a, 3, 3, 2), random_series(b, 3, 3, 2), random_series(c, 3, 3, 2));
        prop_assert!(same(&f.concat_mul(&g).concat_mul(&h), &f.concat_mul(&g.concat_mul(&h))));
    }
}
