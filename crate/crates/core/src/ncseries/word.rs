//! Letters, words and harmonic words.

use crate::error::{Error, Result};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    E0,
    /// e_{zeta^k}
    X(u16),
}

impl Letter {
    pub fn is_e0(self) -> bool {
        matches!(self, Letter::E0)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn weight(&self) -> usize {
        self.0.len()
    }

    pub fn depth(&self) -> usize {
        self.0.iter().filter(|l| !l.is_e0()).count()
    }

    pub fn concat(&self, o: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&o.0);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// e0^l * w
    pub fn e0_prefix(l: usize, w: &Word) -> Word {
        let mut v = vec![Letter::E0; l];
        v.extend_from_slice(&w.0);
        Word(v)
    }

    /// Parses whitespace-separated tokens "0", "x{k}" (and "1" for x0), or a
    /// compact string over {0, 1}.
    pub fn parse(s: &str, n_roots: u32) -> Result<Word> {
        let s = s.trim();
        let tokens: Vec<String> = if s.contains(char::is_whitespace) {
            s.split_whitespace().map(str::to_string).collect()
        } else if s.chars().all(|c| c == '0' || c == '1') {
            s.chars().map(|c| c.to_string()).collect()
        } else if s.is_empty() {
            Vec::new()
        } else {
            vec![s.to_string()]
        };
        let mut letters = Vec::with_capacity(tokens.len());
        for t in tokens {
            let letter = match t.as_str() {
                "0" => Letter::E0,
                "1" => Letter::X(0),
                _ => {
                    let k: i64 = t
                        .strip_prefix('x')
                        .and_then(|k| k.parse().ok())
                        .ok_or_else(|| Error::Parse(format!("bad letter token {t:?}")))?;
                    Letter::X(k.rem_euclid(n_roots as i64) as u16)
                }
            };
            letters.push(letter);
        }
        Ok(Word(letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let toks: Vec<String> = self
            .0
            .iter()
            .map(|l| match l {
                Letter::E0 => "0".to_string(),
                Letter::X(k) => format!("x{k}"),
            })
            .collect();
        write!(f, "{}", toks.join(" "))
    }
}

/// ((n_i)_d ; (xi_i)_{d+1}) with roots given as exponents of zeta_N.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HarmonicWord {
    pub exps: Vec<u32>,
    pub roots: Vec<i64>,
}

impl HarmonicWord {
    /// N = 1 word with all roots trivial.
    pub fn plain(exps: &[u32]) -> HarmonicWord {
        HarmonicWord { exps: exps.to_vec(), roots: vec![0; exps.len() + 1] }
    }

    pub fn new(exps: Vec<u32>, roots: Vec<i64>) -> Result<HarmonicWord> {
        if exps.is_empty() || roots.len() != exps.len() + 1 || exps.contains(&0) {
            return Err(Error::Parse("harmonic word needs d >= 1 positive exponents and d + 1 roots".into()));
        }
        Ok(HarmonicWord { exps, roots })
    }

    pub fn depth(&self) -> usize {
        self.exps.len()
    }

    /// Sum of the exponents.
    pub fn weight(&self) -> usize {
        self.exps.iter().map(|&n| n as usize).sum()
    }

    /// Length of the embedded word: weight + 1.
    pub fn word_len(&self) -> usize {
        self.weight() + 1
    }

    fn letter(&self, i: usize, n_roots: u32) -> Letter {
        Letter::X(self.roots[i].rem_euclid(n_roots as i64) as u16)
    }

    /// e_{xi_{d+1}} e0^{n_d-1} e_{xi_d} ... e0^{n_1-1} e_{xi_1}
    pub fn embed(&self, n_roots: u32) -> Word {
        let d = self.depth();
        let mut v = vec![self.letter(d, n_roots)];
        for i in (0..d).rev() {
            v.extend(std::iter::repeat_n(Letter::E0, self.exps[i] as usize - 1));
            v.push(self.letter(i, n_roots));
        }
        Word(v)
    }

    /// Inverse of `embed`; `None` unless the word starts and ends with a non-e0 letter.
    pub fn from_word(w: &Word) -> Option<HarmonicWord> {
        let letters = &w.0;
        if letters.len() < 2 || letters[0].is_e0() || letters[letters.len() - 1].is_e0() {
            return None;
        }
        let mut exps = Vec::new();
        let mut roots = Vec::new();
        let mut run = 0u32;
        for l in letters.iter().rev() {
            match l {
                Letter::E0 => run += 1,
                Letter::X(k) => {
                    if !roots.is_empty() {
                        exps.push(run + 1);
                    }
                    roots.push(*k as i64);
                    run = 0;
                }
            }
        }
        Some(HarmonicWord { exps, roots })
    }

    /// Parses "(n1,...,nd)" optionally followed by "/(k1,...,k_{d+1})".
    pub fn parse(s: &str) -> Result<HarmonicWord> {
        fn list(s: &str) -> Result<Vec<i64>> {
            let inner = s
                .trim()
                .strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(|| Error::Parse(format!("expected a parenthesized list, got {s:?}")))?;
            inner
                .split(',')
                .map(|t| t.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad integer {t:?}"))))
                .collect()
        }
        let (e, r) = match s.split_once('/') {
            Some((e, r)) => (e, Some(r)),
            None => (s, None),
        };
        let exps = list(e)?;
        if exps.iter().any(|&n| n < 1) {
            return Err(Error::Parse("exponents must be positive".into()));
        }
        let exps: Vec<u32> = exps.into_iter().map(|n| n as u32).collect();
        let roots = match r {
            Some(r) => list(r)?,
            None => vec![0; exps.len() + 1],
        };
        HarmonicWord::new(exps, roots)
    }

    /// Ratio letters (n_i, k_{i+1} - k_i) and the top root k_{d+1}; the form in
    /// which harmonic sums multiply.
    pub fn ratio_form(&self, n_roots: u32) -> (Vec<(u32, i64)>, i64) {
        let n = n_roots as i64;
        let pairs = (0..self.depth())
            .map(|i| (self.exps[i], (self.roots[i + 1] - self.roots[i]).rem_euclid(n)))
            .collect();
        (pairs, self.roots[self.depth()].rem_euclid(n))
    }

    pub fn from_ratio_form(pairs: &[(u32, i64)], top: i64, n_roots: u32) -> HarmonicWord {
        let n = n_roots as i64;
        let d = pairs.len();
        let mut roots = vec![0i64; d + 1];
        roots[d] = top.rem_euclid(n);
        for i in (0..d).rev() {
            roots[i] = (roots[i + 1] - pairs[i].1).rem_euclid(n);
        }
        HarmonicWord { exps: pairs.iter().map(|p| p.0).collect(), roots }
    }
}

impl fmt::Display for HarmonicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e: Vec<String> = self.exps.iter().map(|n| n.to_string()).collect();
        let r: Vec<String> = self.roots.iter().map(|n| n.to_string()).collect();
        write!(f, "({})/({})", e.join(","), r.join(","))
    }
}

/// All words of length exactly `len` and depth at most `dcap` over N letters.
pub fn words_of_length(len: usize, dcap: usize, n_roots: u32) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &out {
            let mut a = w.0.clone();
            a.push(Letter::E0);
            next.push(Word(a));
            if w.depth() < dcap {
                for k in 0..n_roots {
                    let mut b = w.0.clone();
                    b.push(Letter::X(k as u16));
                    next.push(Word(b));
                }
            }
        }
        out = next;
    }
    out
}

/// All words up to the caps.
pub fn all_words(wcap: usize, dcap: usize, n_roots: u32) -> Vec<Word> {
    (0..=wcap).flat_map(|l| words_of_length(l, dcap, n_roots)).collect()
}
