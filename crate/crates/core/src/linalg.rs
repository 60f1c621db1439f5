//! Dense exact linear algebra over the rationals.
//!
//! Systems here are tiny (at most a couple dozen unknowns), so plain
//! Gauss-Jordan elimination over `BigRational` is enough. Pivot choice is the
//! first nonzero entry in the column; it only affects intermediate values.

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("singular system: no pivot in column {0}")]
    Singular(usize),
    #[error("dimension mismatch: {rows}x{cols} matrix against right-hand side of length {rhs}")]
    Dimension { rows: usize, cols: usize, rhs: usize },
}

/// Solves `a * x = rhs` for square `a`.
pub fn solve(a: &[Vec<Rational>], rhs: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
    let n = a.len();
    if rhs.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(LinalgError::Dimension {
            rows: n,
            cols: a.first().map_or(0, Vec::len),
            rhs: rhs.len(),
        });
    }
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .ok_or(LinalgError::Singular(col))?;
        m.swap(col, pivot);
        let p = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x = &*x / &p;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in col..=n {
                let delta = &f * &m[col][c];
                m[r][c] -= delta;
            }
        }
    }
    Ok(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

pub fn determinant(a: &[Vec<Rational>]) -> Rational {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = Rational::from_integer(1.into());
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            m.swap(col, pivot);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &p;
            for c in col..n {
                let delta = &f * &m[col][c];
                m[r][c] -= delta;
            }
        }
    }
    det
}

/// Sylvester's criterion on `-a`: every leading principal minor of `-a` is
/// positive.
pub fn is_negative_definite(a: &[Vec<Rational>]) -> bool {
    let n = a.len();
    let neg: Vec<Vec<Rational>> = a.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
    (1..=n).all(|k| {
        let minor: Vec<Vec<Rational>> = neg[..k].iter().map(|r| r[..k].to_vec()).collect();
        determinant(&minor).is_positive()
    })
}
