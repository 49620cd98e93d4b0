//! Truncated non-commutative power series.

use super::shuffle::shuffle_set;
use super::word::{all_words, HarmonicWord, Letter, Word};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use std::collections::BTreeMap;

/// A series truncated at weight `weight_cap` and depth `depth_cap`.
#[derive(Debug, Clone, PartialEq)]
pub struct NCSeries<S: Scalar> {
    pub n_roots: u32,
    pub weight_cap: usize,
    pub depth_cap: usize,
    pub grouplike: bool,
    pub harmonic: bool,
    proto: S,
    terms: BTreeMap<Word, S>,
}

impl<S: Scalar> NCSeries<S> {
    /// The zero series; `proto` fixes the scalar field.
    pub fn zero(proto: &S, n_roots: u32, weight_cap: usize, depth_cap: usize) -> Self {
        NCSeries {
            n_roots,
            weight_cap,
            depth_cap,
            grouplike: false,
            harmonic: false,
            proto: proto.zero_like(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(proto: &S, n_roots: u32, weight_cap: usize, depth_cap: usize) -> Self {
        let mut s = Self::zero(proto, n_roots, weight_cap, depth_cap);
        s.terms.insert(Word::empty(), proto.one_like());
        s.grouplike = true;
        s
    }

    /// The series consisting of one letter.
    pub fn letter(proto: &S, n_roots: u32, weight_cap: usize, depth_cap: usize, l: Letter) -> Self {
        let mut s = Self::zero(proto, n_roots, weight_cap, depth_cap);
        s.set(Word(vec![l]), proto.one_like());
        s
    }

    /// e_1 (the letter e_{zeta^0}).
    pub fn e1(proto: &S, n_roots: u32, weight_cap: usize, depth_cap: usize) -> Self {
        Self::letter(proto, n_roots, weight_cap, depth_cap, Letter::X(0))
    }

    pub fn empty_like(&self) -> Self {
        Self::zero(&self.proto, self.n_roots, self.weight_cap, self.depth_cap)
    }

    pub fn proto(&self) -> &S {
        &self.proto
    }

    pub fn fits(&self, w: &Word) -> bool {
        w.weight() <= self.weight_cap && w.depth() <= self.depth_cap
    }

    /// Sets a coefficient; words beyond the caps are dropped.
    pub fn set(&mut self, w: Word, c: S) {
        if !self.fits(&w) {
            return;
        }
        if c.is_zero() {
            self.terms.remove(&w);
        } else {
            self.terms.insert(w, c);
        }
    }

    /// Adds `c` to the coefficient of `w`.
    pub fn add_term(&mut self, w: Word, c: S) {
        if !self.fits(&w) || c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(old) => {
                let v = old.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&w);
                } else {
                    *old = v;
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn coeff(&self, w: &Word) -> S {
        self.terms.get(w).cloned().unwrap_or_else(|| self.proto.zero_like())
    }

    pub fn get(&self, w: &Word) -> Option<&S> {
        self.terms.get(w)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &S)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn map_coeffs(&self, f: impl Fn(&Word, &S) -> S) -> Self {
        let mut out = self.empty_like();
        for (w, c) in &self.terms {
            out.set(w.clone(), f(w, c));
        }
        out
    }

    pub fn filter(&self, keep: impl Fn(&Word) -> bool) -> Self {
        let mut out = self.empty_like();
        out.terms = self.terms.iter().filter(|(w, _)| keep(w)).map(|(w, c)| (w.clone(), c.clone())).collect();
        out
    }

    /// Re-truncates at smaller caps.
    pub fn truncate(&self, weight_cap: usize, depth_cap: usize) -> Self {
        let mut out = self.filter(|w| w.weight() <= weight_cap && w.depth() <= depth_cap);
        out.weight_cap = weight_cap.min(self.weight_cap);
        out.depth_cap = depth_cap.min(self.depth_cap);
        out.grouplike = self.grouplike;
        out.harmonic = self.harmonic;
        out
    }

    /// Same terms with larger caps declared (no new information is invented).
    pub fn with_caps(&self, weight_cap: usize, depth_cap: usize) -> Self {
        let mut out = self.truncate(weight_cap, depth_cap);
        out.weight_cap = weight_cap;
        out.depth_cap = depth_cap;
        out
    }

    fn check_compat(&self, o: &Self) -> Result<()> {
        if self.n_roots != o.n_roots {
            return Err(Error::CapMismatch(format!("N = {} vs N = {}", self.n_roots, o.n_roots)));
        }
        Ok(())
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.check_compat(o)?;
        let mut out = self.truncate(self.weight_cap.min(o.weight_cap), self.depth_cap.min(o.depth_cap));
        out.grouplike = false;
        out.harmonic = self.harmonic && o.harmonic;
        for (w, c) in &o.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn add(&self, o: &Self) -> Self {
        self.try_add(o).expect("series with different N")
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.map_coeffs(|_, c| -c.clone());
        out.harmonic = self.harmonic;
        out
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = self.map_coeffs(|_, c| c.clone() * s.clone());
        out.harmonic = self.harmonic;
        out
    }

    /// Cauchy product by concatenation, truncated to the smaller caps.
    pub fn try_concat_mul(&self, o: &Self) -> Result<Self> {
        self.check_compat(o)?;
        let wcap = self.weight_cap.min(o.weight_cap);
        let dcap = self.depth_cap.min(o.depth_cap);
        let mut out = Self::zero(&self.proto, self.n_roots, wcap, dcap);
        let right: Vec<(&Word, &S, usize, usize)> = o.terms.iter().map(|(w, c)| (w, c, w.weight(), w.depth())).collect();
        for (u, a) in &self.terms {
            let (wu, du) = (u.weight(), u.depth());
            if wu > wcap || du > dcap {
                continue;
            }
            for (v, b, wv, dv) in &right {
                if wu + wv <= wcap && du + dv <= dcap {
                    out.add_term(u.concat(v), a.clone() * (*b).clone());
                }
            }
        }
        out.grouplike = self.grouplike && o.grouplike;
        Ok(out)
    }

    pub fn concat_mul(&self, o: &Self) -> Self {
        self.try_concat_mul(o).expect("series with different N")
    }

    /// Inverse for concatenation: geometric series in the non-constant part.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.coeff(&Word::empty());
        let c0inv = c0.inv().ok_or_else(|| Error::NotInvertible("constant term is zero".into()))?;
        // f = c0 (1 + u)
        let mut u = self.scale(&c0inv);
        u.terms.remove(&Word::empty());
        let mneg_u = u.neg();
        let mut acc = Self::one(&self.proto, self.n_roots, self.weight_cap, self.depth_cap);
        let mut power = acc.clone();
        let min_w = u.terms.keys().map(|w| w.weight()).min().unwrap_or(usize::MAX);
        if min_w == 0 {
            return Err(Error::NotInvertible("non-constant part has a weight-0 term".into()));
        }
        for _ in 0..self.weight_cap {
            power = power.concat_mul(&mneg_u);
            if power.is_empty() {
                break;
            }
            acc = acc.add(&power);
        }
        let mut out = acc.scale(&c0inv);
        out.grouplike = self.grouplike;
        Ok(out)
    }

    /// Antipode formula (-1)^{|w|} f[reverse(w)], valid for grouplike f.
    pub fn antipode(&self) -> Self {
        let mut out = self.empty_like();
        for (w, c) in &self.terms {
            let c = if w.weight() % 2 == 1 { -c.clone() } else { c.clone() };
            out.set(w.reversed(), c);
        }
        out.grouplike = self.grouplike;
        out
    }

    /// Multiplies the weight-n part by lambda^n.
    pub fn tau_scale(&self, lambda: &S) -> Self {
        let mut pows = vec![self.proto.one_like()];
        for i in 1..=self.weight_cap {
            let next = pows[i - 1].clone() * lambda.clone();
            pows.push(next);
        }
        let mut out = self.map_coeffs(|w, c| c.clone() * pows[w.weight()].clone());
        out.grouplike = self.grouplike;
        out.harmonic = self.harmonic;
        out
    }

    /// Multiplies the weight-n part by lambda^(n-1) (the grading on Ad-series).
    pub fn tau_scale_ad(&self, lambda: &S) -> Self {
        let inv = lambda.inv().expect("tau' needs an invertible lambda");
        self.tau_scale(lambda).scale(&inv)
    }

    /// The weight-n part.
    pub fn tau_n(&self, n: usize) -> Self {
        let mut out = self.filter(|w| w.weight() == n);
        out.harmonic = self.harmonic;
        out
    }

    /// The part of depth at most d.
    pub fn tau_depth_le(&self, d: usize) -> Self {
        let mut out = self.filter(|w| w.depth() <= d);
        out.harmonic = self.harmonic;
        out
    }

    /// Relabels e_eta as e_{xi eta} with xi = zeta^k.
    pub fn xi_twist(&self, k: i64) -> Self {
        let n = self.n_roots as i64;
        let k = k.rem_euclid(n);
        if k == 0 {
            return self.clone();
        }
        let mut out = self.empty_like();
        for (w, c) in &self.terms {
            let letters = w
                .0
                .iter()
                .map(|l| match l {
                    Letter::E0 => Letter::E0,
                    Letter::X(j) => Letter::X(((*j as i64 + k).rem_euclid(n)) as u16),
                })
                .collect();
            out.set(Word(letters), c.clone());
        }
        out.grouplike = self.grouplike;
        out.harmonic = self.harmonic;
        out
    }

    /// Restriction to embedded harmonic words.
    pub fn harmonic_project(&self) -> Self {
        let mut out = self.filter(|w| HarmonicWord::from_word(w).is_some());
        out.harmonic = true;
        out
    }

    /// Checks f[empty] = 1 and f[u] f[v] = sum over shuffles for all words within caps.
    pub fn check_grouplike(&self) -> bool {
        if self.coeff(&Word::empty()) != self.proto.one_like() {
            return false;
        }
        let words = all_words(self.weight_cap, self.depth_cap, self.n_roots);
        for (i, u) in words.iter().enumerate() {
            if u.weight() == 0 {
                continue;
            }
            for v in &words[i..] {
                if v.weight() == 0 || u.weight() + v.weight() > self.weight_cap || u.depth() + v.depth() > self.depth_cap {
                    continue;
                }
                let lhs = self.coeff(u) * self.coeff(v);
                let mut rhs = self.proto.zero_like();
                for w in shuffle_set(u, v) {
                    if let Some(c) = self.get(&w) {
                        rhs = rhs + c.clone();
                    }
                }
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// Harmonic-word view of a harmonic-part series.
    pub fn harmonic_coeff(&self, hw: &HarmonicWord) -> S {
        self.coeff(&hw.embed(self.n_roots))
    }

    pub fn harmonic_terms(&self) -> Vec<(HarmonicWord, S)> {
        self.terms.iter().filter_map(|(w, c)| HarmonicWord::from_word(w).map(|h| (h, c.clone()))).collect()
    }

    pub fn to_json(&self, p: Option<u64>) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(w, c)| serde_json::json!({ "word": w.to_string(), "coeff": c.to_json() }))
            .collect();
        serde_json::json!({
            "p": p,
            "N": self.n_roots,
            "weight_cap": self.weight_cap,
            "depth_cap": self.depth_cap,
            "scalar": S::KIND.name(),
            "terms": terms,
        })
    }

    /// Reads the JSON form; `proto` supplies the field.
    pub fn from_json(v: &serde_json::Value, proto: &S) -> Result<Self> {
        let bad = |s: &str| Error::Parse(format!("series JSON: {s}"));
        let n = v.get("N").and_then(|x| x.as_u64()).ok_or_else(|| bad("missing N"))? as u32;
        let wcap = v.get("weight_cap").and_then(|x| x.as_u64()).ok_or_else(|| bad("missing weight_cap"))? as usize;
        let dcap = v.get("depth_cap").and_then(|x| x.as_u64()).ok_or_else(|| bad("missing depth_cap"))? as usize;
        if let Some(kind) = v.get("scalar").and_then(|x| x.as_str()) {
            if kind != S::KIND.name() {
                return Err(Error::CapMismatch(format!("expected {} scalars, got {kind}", S::KIND.name())));
            }
        }
        let mut out = Self::zero(proto, n, wcap, dcap);
        for t in v.get("terms").and_then(|x| x.as_array()).ok_or_else(|| bad("missing terms"))? {
            let w = Word::parse(t.get("word").and_then(|x| x.as_str()).ok_or_else(|| bad("term without word"))?, n)?;
            if !out.fits(&w) {
                return Err(bad(&format!("word {w} exceeds the caps")));
            }
            let c = proto.from_json_like(t.get("coeff").ok_or_else(|| bad("term without coeff"))?)?;
            out.add_term(w, c);
        }
        Ok(out)
    }
}
