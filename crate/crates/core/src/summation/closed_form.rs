//! Closed forms for sums over a symbolic upper bound M.
//!
//! An [`ExpPoly`] is a finite sum of terms c * M^j * U^M. Summing such a term
//! over v < M again gives an `ExpPoly`, which is how nested valuation sums stay
//! closed with M kept symbolic.

use crate::exact::bernoulli::twisted_faulhaber;
use crate::exact::rational::{pow_rat, rat, Rat};
use crate::exact::ExactScalar;
use num_traits::{One, Zero};
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

/// sum over (U, j) of c * M^j * U^M.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExpPoly {
    pub terms: BTreeMap<(Rat, u32), Rat>,
}

fn twisted_rat(u: &Rat, j: usize) -> Vec<Rat> {
    thread_local! {
        static CACHE: RefCell<HashMap<(Rat, usize), Vec<Rat>>> = RefCell::new(HashMap::new());
    }
    CACHE.with(|c| {
        c.borrow_mut()
            .entry((u.clone(), j))
            .or_insert_with(|| {
                twisted_faulhaber(j, &ExactScalar::rational(u.clone()))
                    .iter()
                    .map(|x| x.as_rational().expect("rational input").clone())
                    .collect()
            })
            .clone()
    })
}

impl ExpPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The single term c * M^j * U^M.
    pub fn term(u: Rat, j: u32, c: Rat) -> Self {
        let mut e = Self::zero();
        e.add_term(u, j, c);
        e
    }

    pub fn add_term(&mut self, u: Rat, j: u32, c: Rat) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((u, j)).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&mut self, other: &ExpPoly) {
        for ((u, j), c) in &other.terms {
            self.add_term(u.clone(), *j, c.clone());
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut out = Self::zero();
        for ((u, j), x) in &self.terms {
            out.add_term(u.clone(), *j, x * c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, m: i64) -> Rat {
        let mut acc = Rat::zero();
        for ((u, j), c) in &self.terms {
            acc += c * pow_rat(&rat(m), *j as i64) * pow_rat(u, m);
        }
        acc
    }

    /// Multiplies by T^M.
    pub fn mul_geometric(&self, t: &Rat) -> Self {
        let mut out = Self::zero();
        for ((u, j), c) in &self.terms {
            out.add_term(u * t, *j, c.clone());
        }
        out
    }

    /// Multiplies by the polynomial sum_k a_k M^k.
    pub fn mul_poly(&self, a: &[Rat]) -> Self {
        let mut out = Self::zero();
        for ((u, j), c) in &self.terms {
            for (k, ak) in a.iter().enumerate() {
                out.add_term(u.clone(), j + k as u32, c * ak);
            }
        }
        out
    }

    /// G(M) = sum_{v=0}^{M-1} g(v).
    pub fn indef(&self) -> Self {
        let mut out = Self::zero();
        for ((u, j), c) in &self.terms {
            let p = twisted_rat(u, *j as usize);
            if u.is_one() {
                for (m, pm) in p.iter().enumerate() {
                    out.add_term(Rat::one(), m as u32, c * pm);
                }
            } else {
                // U^M P(M) - P(0)
                for (k, pk) in p.iter().enumerate() {
                    out.add_term(u.clone(), k as u32, c * pk);
                }
                out.add_term(Rat::one(), 0, -(c * &p[0]));
            }
        }
        out
    }
}

/// sum_{v=0}^{M-1} T^v v^alpha, obtained by alpha applications of T d/dT to
/// (T^M - 1)/(T - 1) with T^M carried as the marker U^M.
pub fn geom_poly_sum(alpha: u32, t: &Rat) -> ExpPoly {
    if t.is_one() {
        return ExpPoly::term(Rat::one(), alpha, Rat::one()).indef();
    }
    // Work with rational functions in an indeterminate T evaluated at the end:
    // keep f = sum_j A_j(T) M^j T^M + B(T) with A_j, B rational in T. Each
    // T d/dT acts on T^M as M T^M. Since T is concrete we track values of all
    // T-derivatives through the series of x = T d/dT applied to 1/(T-1).
    //
    // (T d/dT)^k (1/(T-1)) is computed as a polynomial in s = 1/(T-1):
    // T d/dT s = -T s^2 = -(s + s^2).
    let mut derivs: Vec<Vec<Rat>> = vec![vec![Rat::zero(), Rat::one()]];
    for _ in 0..alpha {
        let last = derivs.last().unwrap();
        let mut next = vec![Rat::zero(); last.len() + 1];
        for (k, c) in last.iter().enumerate() {
            // T d/dT s^k = k s^{k-1} * (-(s + s^2)) = -k (s^k + s^{k+1})
            let kk = rat(k as i64);
            next[k] -= &kk * c;
            next[k + 1] -= &kk * c;
        }
        derivs.push(next);
    }
    let s = (t - Rat::one()).recip();
    let eval = |poly: &Vec<Rat>| {
        let mut acc = Rat::zero();
        for c in poly.iter().rev() {
            acc = acc * &s + c;
        }
        acc
    };
    let d: Vec<Rat> = derivs.iter().map(eval).collect();
    // (T d/dT)^alpha (T^M s) = sum_i C(alpha, i) M^{alpha-i} T^M d_i, and the
    // constant part is -(T d/dT)^alpha s = -d_alpha.
    let mut out = ExpPoly::zero();
    for (i, di) in d.iter().enumerate() {
        let c = Rat::from_integer(crate::exact::rational::binomial(alpha as u64, i as u64)) * di;
        out.add_term(t.clone(), alpha - i as u32, c);
    }
    out.add_term(Rat::one(), 0, -d[alpha as usize].clone());
    out
}

/// sum over 0 <= v_1 < .. < v_d <= M-1 of prod_i T_i^{v_i} A_i(v_i), by
/// eliminating the innermost variable first.
pub fn chain_sum_closed(factors: &[(Rat, Vec<Rat>)]) -> ExpPoly {
    assert!(!factors.is_empty(), "chain_sum_closed needs d >= 1");
    let mut g = ExpPoly::term(Rat::one(), 0, Rat::one());
    for (t, a) in factors {
        g = g.mul_poly(a).mul_geometric(t).indef();
    }
    g
}
