//! Exact Gaussian elimination.

use crate::exact::rational::Rat;
use crate::scalar::Scalar;
use num_traits::Zero;

/// Solves a square system given as an augmented matrix `[A | b]`.
/// Returns `None` when A is singular.
pub fn solve_square(mut m: Vec<Vec<Rat>>) -> Option<Vec<Rat>> {
    let n = m.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for j in col..=n {
            m[col][j] = &m[col][j] * &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in col..=n {
                    let t = &f * &m[col][j];
                    m[r][j] -= t;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Outcome of an overdetermined exact solve.
#[derive(Debug, Clone)]
pub enum LinearSolution<S> {
    /// Unique solution.
    Unique(Vec<S>),
    /// Consistent but rank deficient; the free variables were set to zero.
    Underdetermined(Vec<S>),
    /// No solution; index of the first inconsistent row after elimination.
    Inconsistent(usize),
}

/// Row-reduces `rows` (each `[a_1..a_k | b]`) over an exact field.
pub fn solve_exact<S: Scalar>(mut rows: Vec<Vec<S>>, k: usize) -> LinearSolution<S> {
    let nrows = rows.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..k {
        if r == nrows {
            break;
        }
        let Some(piv) = (r..nrows).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = rows[r][col].inv().expect("nonzero pivot in an exact field");
        for j in col..=k {
            rows[r][j] = rows[r][j].clone() * inv.clone();
        }
        for i in 0..nrows {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for j in col..=k {
                    let t = f.clone() * rows[r][j].clone();
                    rows[i][j] = rows[i][j].clone() - t;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if let Some(bad) = (r..nrows).find(|&i| !rows[i][k].is_zero()) {
        return LinearSolution::Inconsistent(bad);
    }
    let zero = rows.first().map(|row| row[k].zero_like());
    let mut sol = vec![zero.expect("at least one sample row"); k];
    for (i, &c) in pivots.iter().enumerate() {
        sol[c] = rows[i][k].clone();
    }
    if pivots.len() == k {
        LinearSolution::Unique(sol)
    } else {
        LinearSolution::Underdetermined(sol)
    }
}
