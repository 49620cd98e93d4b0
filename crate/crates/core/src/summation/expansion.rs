//! Expansions S(a) = sum c_{n,m} Lambda^n a^m with Lambda = base^a.

use crate::error::{Error, Result};
use crate::linalg::{solve_exact, LinearSolution};
use crate::scalar::Scalar;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::ops::RangeInclusive;

/// Finite map (n, m) -> c_{n,m}; `n` is the degree in Lambda, `m` in a.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionPoly<S> {
    pub terms: BTreeMap<(i64, u32), S>,
}

impl<S> Default for ExpansionPoly<S> {
    fn default() -> Self {
        ExpansionPoly { terms: BTreeMap::new() }
    }
}

impl<S: Scalar> ExpansionPoly<S> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, n: i64, m: u32, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&(n, m)) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert((n, m), s);
                }
            }
            None => {
                self.terms.insert((n, m), c);
            }
        }
    }

    pub fn add(&mut self, other: &ExpansionPoly<S>) {
        for (&(n, m), c) in &other.terms {
            self.add_term(n, m, c.clone());
        }
    }

    pub fn coeff(&self, n: i64, m: u32) -> Option<&S> {
        self.terms.get(&(n, m))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest a-degree present (0 for the empty poly).
    pub fn a_degree(&self) -> u32 {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> ExpansionPoly<T> {
        let mut out = ExpansionPoly::new();
        for (&(n, m), c) in &self.terms {
            out.add_term(n, m, f(c));
        }
        out
    }

    /// Part of a-degree zero, as Lambda-degree -> coefficient.
    pub fn constant_in_a(&self) -> BTreeMap<i64, S> {
        self.terms.iter().filter(|(k, _)| k.1 == 0).map(|(k, c)| (k.0, c.clone())).collect()
    }

    /// S(a) with Lambda = base^a.
    pub fn eval(&self, base: &S, a: i64) -> S {
        let lambda = base.pow_signed(a);
        self.eval_at(&lambda, &base.from_int_like(a))
    }

    /// sum c Lambda^n a^m at explicit Lambda and a.
    pub fn eval_at(&self, lambda: &S, a: &S) -> S {
        let mut acc = lambda.zero_like();
        for (&(n, m), c) in &self.terms {
            acc = acc + c.clone() * lambda.pow_signed(n) * a.pow(m as u64);
        }
        acc
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(&(n, m), c)| json!({ "n": n, "m": m, "coeff": c.to_json() }))
            .collect();
        json!({ "terms": terms })
    }

    pub fn from_json(v: &Value, proto: &S) -> Result<Self> {
        let arr = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("expansion needs a \"terms\" array".into()))?;
        let mut out = Self::new();
        for t in arr {
            let n = t.get("n").and_then(Value::as_i64).ok_or_else(|| Error::Parse("term without n".into()))?;
            let m = t.get("m").and_then(Value::as_u64).ok_or_else(|| Error::Parse("term without m".into()))?;
            let c = proto.from_json_like(t.get("coeff").ok_or_else(|| Error::Parse("term without coeff".into()))?)?;
            out.add_term(n, m as u32, c);
        }
        Ok(out)
    }
}

/// Solves S(a) = sum c_{n,m} (base^a)^n a^m for the unknowns with n in
/// `n_range` and m <= `m_cap`. The solution is unique when it exists;
/// inconsistent samples are reported with the first nonzero residual.
pub fn fit_expansion<S: Scalar>(
    samples: &[(i64, S)],
    base: &S,
    n_range: RangeInclusive<i64>,
    m_cap: u32,
) -> Result<ExpansionPoly<S>> {
    if samples.is_empty() {
        return Ok(ExpansionPoly::new());
    }
    let unknowns: Vec<(i64, u32)> = n_range.flat_map(|n| (0..=m_cap).map(move |m| (n, m))).collect();
    let row = |a: i64, s: &S| -> Vec<S> {
        let lambda = base.pow_signed(a);
        let av = base.from_int_like(a);
        let mut r: Vec<S> = unknowns.iter().map(|&(n, m)| lambda.pow_signed(n) * av.pow(m as u64)).collect();
        r.push(s.clone());
        r
    };
    let build = |sol: Vec<S>| {
        let mut e = ExpansionPoly::new();
        for (&(n, m), c) in unknowns.iter().zip(sol) {
            e.add_term(n, m, c);
        }
        e
    };
    let rows: Vec<Vec<S>> = samples.iter().map(|(a, s)| row(*a, s)).collect();
    match solve_exact(rows.clone(), unknowns.len()) {
        LinearSolution::Unique(sol) => Ok(build(sol)),
        LinearSolution::Underdetermined(_) => Err(Error::Precondition(format!(
            "{} samples do not determine {} coefficients",
            samples.len(),
            unknowns.len()
        ))),
        LinearSolution::Inconsistent(_) => {
            // Locate the first sample that breaks consistency and report its residual.
            for k in 1..=samples.len() {
                if let LinearSolution::Inconsistent(_) = solve_exact(rows[..k].to_vec(), unknowns.len()) {
                    let sol = match solve_exact(rows[..k - 1].to_vec(), unknowns.len()) {
                        LinearSolution::Unique(s) | LinearSolution::Underdetermined(s) => s,
                        LinearSolution::Inconsistent(_) => unreachable!("prefix was consistent"),
                    };
                    let (a, s) = &samples[k - 1];
                    let residual = s.clone() - build(sol).eval(base, *a);
                    return Err(Error::Inconsistent(format!(
                        "samples admit no expansion: residual {} at a = {a}",
                        residual.to_json()
                    )));
                }
            }
            unreachable!("full system was inconsistent")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;
    use crate::ExactScalar;

    fn q(n: i64) -> ExactScalar {
        ExactScalar::rational(rat(n))
    }

    #[test]
    fn synthetic_round_trip() {
        let mut e = ExpansionPoly::new();
        e.add_term(2, 0, q(5));
        e.add_term(1, 1, q(1));
        let base = q(3);
        let samples: Vec<_> = (1..=8).map(|a| (a, e.eval(&base, a))).collect();
        let fit = fit_expansion(&samples, &base, 0..=2, 1).unwrap();
        assert_eq!(fit, e);
    }

    #[test]
    fn zero_samples() {
        let base = q(3);
        let samples: Vec<_> = (1..=4).map(|a| (a, q(0))).collect();
        assert!(fit_expansion(&samples, &base, 0..=1, 1).unwrap().is_zero());
    }

    #[test]
    fn inconsistent_rejected() {
        let base = q(2);
        let samples: Vec<_> = (1..=5).map(|a| (a, q(a * a * a))).collect();
        match fit_expansion(&samples, &base, 0..=1, 0) {
            Err(Error::Inconsistent(msg)) => assert!(msg.contains("residual")),
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn json_round_trip() {
        let mut e = ExpansionPoly::new();
        e.add_term(-1, 2, q(7));
        let back = ExpansionPoly::from_json(&e.to_json(), &q(0)).unwrap();
        assert_eq!(back, e);
    }
}
