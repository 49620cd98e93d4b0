//! Series-side iteration of prime weighted harmonic sums.

pub mod closed_form;
pub mod engine;
pub mod expansion;

pub use crate::exact::bernoulli::faulhaber_twisted;
pub use closed_form::{chain_sum_closed, geom_poly_sum, ExpPoly};
pub use engine::{depth1_closed_form, eliminate_ur, engine, engine_block, patterns_for, sum_over_valuations, Pattern, PatternTerm};
pub use expansion::{fit_expansion, ExpansionPoly};

use crate::error::{Error, Result};
use crate::exact::rational::floor_log;
use crate::exact::{PadicField, PadicScalar};
use crate::ncseries::HarmonicWord;

/// m = Q^v (Q u + r) with 0 < r < Q.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DigitDecomposition {
    pub v: u32,
    pub u: u64,
    pub r: u64,
}

impl DigitDecomposition {
    pub fn of(m: u64, q: u64) -> Self {
        assert!(m > 0 && q > 1);
        let (mut m, mut v) = (m, 0);
        while m % q == 0 {
            m /= q;
            v += 1;
        }
        let d = DigitDecomposition { v, u: m / q, r: m % q };
        debug_assert_eq!(d.value(q), m * q.pow(v));
        d
    }

    pub fn value(&self, q: u64) -> u64 {
        q.pow(self.v) * (q * self.u + self.r)
    }
}

/// Index data of a truncated term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermIndex {
    /// Engine block with l_1 + .. + l_d = s for a word of weight `weight`.
    EngineBlock { weight: u32, s: u32 },
    /// Term l of the series for the coefficient at e0^b e1 e0^{n-1} e1.
    AdCoeff { n: u32, l: u32, p: u64 },
}

/// Lower bound on the valuation of a term. Engine blocks are finite sums of
/// Lambda^n m^{-n} binomial terms each of valuation >= weight + s; the Ad
/// coefficient term combines v(har_Q(n+l)) >= n + l with the bound
/// v(𝓑^l_m) >= -1 - log_p(l+1).
pub fn truncation_certificate(t: TermIndex) -> i64 {
    match t {
        TermIndex::EngineBlock { weight, s } => weight as i64 + s as i64,
        TermIndex::AdCoeff { n, l, p } => n as i64 + l as i64 - 1 - floor_log(p, l as u64 + 1),
    }
}

/// Smallest engine truncation reaching `target`.
pub fn engine_lmax(w: &HarmonicWord, target: i64) -> usize {
    (target - w.weight() as i64 - 1).max(0) as usize
}

/// har(Q^a, w) with Q = p^alpha0, from the engine expansion. The certificate
/// is the block bound at s = lmax + 1.
pub fn iter_har_series(p: u64, alpha0: u32, a: u32, w: &HarmonicWord, target: i64) -> Result<PadicScalar> {
    if a == 0 || alpha0 == 0 {
        return Err(Error::Config("alpha0 and a must be positive".into()));
    }
    let q = p.pow(alpha0);
    let lmax = engine_lmax(w, target);
    let cert = truncation_certificate(TermIndex::EngineBlock { weight: w.weight() as u32, s: lmax as u32 + 1 });
    let e = engine(w, q, lmax)?;
    if e.terms.keys().any(|&(n, _)| n < 0) {
        return Err(Error::Inconsistent("engine produced a negative Lambda degree".into()));
    }
    let base = crate::ExactScalar::rational(crate::exact::rational::rat(q as i64));
    let value = e.eval(&base, a as i64);
    let field = PadicField::get(p, 1, cert.max(1))?;
    let x = field.embed(&value, cert)?;
    Ok(x.with_prec(cert))
}
