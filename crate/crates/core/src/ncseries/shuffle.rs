//! Shuffle and quasi-shuffle products.

use super::word::{HarmonicWord, Letter, Word};

/// The multiset of riffle shuffles of `u` and `v`.
pub fn shuffle_set(u: &Word, v: &Word) -> Vec<Word> {
    fn go(u: &[Letter], v: &[Letter], prefix: &mut Vec<Letter>, out: &mut Vec<Word>) {
        if u.is_empty() || v.is_empty() {
            let mut w = prefix.clone();
            w.extend_from_slice(u);
            w.extend_from_slice(v);
            out.push(Word(w));
            return;
        }
        prefix.push(u[0]);
        go(&u[1..], v, prefix, out);
        prefix.pop();
        prefix.push(v[0]);
        go(u, &v[1..], prefix, out);
        prefix.pop();
    }
    let mut out = Vec::new();
    go(&u.0, &v.0, &mut Vec::new(), &mut out);
    out
}

type RatioLetter = (u32, i64);

fn stuffle_letters(u: &[RatioLetter], v: &[RatioLetter], n: i64) -> Vec<Vec<RatioLetter>> {
    if u.is_empty() {
        return vec![v.to_vec()];
    }
    if v.is_empty() {
        return vec![u.to_vec()];
    }
    // Recursion on the last (largest-index) letters.
    let (a, ua) = (u[u.len() - 1], &u[..u.len() - 1]);
    let (b, vb) = (v[v.len() - 1], &v[..v.len() - 1]);
    let mut out = Vec::new();
    for mut w in stuffle_letters(ua, v, n) {
        w.push(a);
        out.push(w);
    }
    for mut w in stuffle_letters(u, vb, n) {
        w.push(b);
        out.push(w);
    }
    for mut w in stuffle_letters(ua, vb, n) {
        w.push((a.0 + b.0, (a.1 + b.1).rem_euclid(n)));
        out.push(w);
    }
    out
}

/// Quasi-shuffle of harmonic words: interleavings plus contractions that add
/// exponents and multiply root ratios. The product of the two sums carries the
/// product of the top roots.
pub fn stuffle_set(u: &HarmonicWord, v: &HarmonicWord, n_roots: u32) -> Vec<HarmonicWord> {
    let (pu, tu) = u.ratio_form(n_roots);
    let (pv, tv) = v.ratio_form(n_roots);
    let top = tu + tv;
    stuffle_letters(&pu, &pv, n_roots as i64)
        .into_iter()
        .map(|w| HarmonicWord::from_ratio_form(&w, top, n_roots))
        .collect()
}
