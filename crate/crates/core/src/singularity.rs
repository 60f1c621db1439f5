//! Cyclic quotient singularities `[m,k]`, their Hirzebruch-Jung chains and
//! minimal log discrepancies against a boundary curve of coefficient `b`.
//!
//! Chains are always stored with the curve met by C first. When a boundary
//! component of coefficient `(d-1)/d` passes through the point, the stored
//! type is `(d*m', d*k')`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{int, rat, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SingularityError {
    #[error("m = {m} and k = {k} are not coprime")]
    NotCoprime { m: u64, k: u64 },
    #[error("k = {k} out of range for m = {m}")]
    OutOfRange { m: u64, k: u64 },
    #[error("k = {0} >= 7: not 1/7-log terminal")]
    NotLogTerminal(u64),
    #[error("chain weight {0} is not <= -2")]
    BadWeight(i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CyclicQuotientType {
    pub m: u64,
    pub k: u64,
    pub d: u64,
}

impl CyclicQuotientType {
    /// Type of a point with no extra boundary component through it.
    pub fn new(m: u64, k: u64) -> Result<Self, SingularityError> {
        Self::with_boundary(m, k, 1)
    }

    /// Scales the underlying `(m', k')` by `d`. `m' = k' = 1` encodes a
    /// smooth point with a component through it.
    pub fn with_boundary(m: u64, k: u64, d: u64) -> Result<Self, SingularityError> {
        if k == 0 || k > m || d == 0 {
            return Err(SingularityError::OutOfRange { m, k });
        }
        if k == m && m != 1 {
            return Err(SingularityError::OutOfRange { m, k });
        }
        if m.gcd(&k) != 1 {
            return Err(SingularityError::NotCoprime { m, k });
        }
        Ok(Self { m: d * m, k: d * k, d })
    }

    pub fn underlying(&self) -> (u64, u64) {
        (self.m / self.d, self.k / self.d)
    }

    pub fn is_smooth(&self) -> bool {
        self.m == self.k
    }

    pub fn chain(&self) -> Result<ResolutionChain, SingularityError> {
        let (m, k) = self.underlying();
        let mut chain = hj_expand(m, k)?;
        chain.d = self.d;
        Ok(chain)
    }

    /// The same point seen from the other end of its chain.
    pub fn reversed(&self) -> Self {
        let (m, k) = self.underlying();
        let kinv = if m == 1 { 1 } else { mod_inverse(k, m) };
        Self { m: self.d * m, k: self.d * kinv, d: self.d }
    }
}

fn mod_inverse(k: u64, m: u64) -> u64 {
    let e = (k as i128).extended_gcd(&(m as i128));
    e.x.rem_euclid(m as i128) as u64
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionChain {
    pub weights: Vec<i64>,
    pub d: u64,
}

impl ResolutionChain {
    pub fn new(weights: Vec<i64>) -> Result<Self, SingularityError> {
        if let Some(&w) = weights.iter().find(|&&w| w > -2) {
            return Err(SingularityError::BadWeight(w));
        }
        Ok(Self { weights, d: 1 })
    }

    pub fn cq_type(&self) -> CyclicQuotientType {
        let (m, k) = hj_contract(self);
        CyclicQuotientType { m: self.d * m, k: self.d * k, d: self.d }
    }
}

/// Chain `(-w1, ..., -wr)` with `m/(m-k) = w1 - 1/(w2 - ...)`.
pub fn hj_expand(m: u64, k: u64) -> Result<ResolutionChain, SingularityError> {
    if k == 0 || k >= m {
        return Err(SingularityError::OutOfRange { m, k });
    }
    if m.gcd(&k) != 1 {
        return Err(SingularityError::NotCoprime { m, k });
    }
    let (mut p, mut q) = (m as i64, (m - k) as i64);
    let mut weights = Vec::new();
    while q > 0 {
        let w = (p + q - 1) / q;
        weights.push(-w);
        (p, q) = (q, w * q - p);
    }
    Ok(ResolutionChain { weights, d: 1 })
}

/// Inverse of [`hj_expand`]; ignores `chain.d`.
pub fn hj_contract(chain: &ResolutionChain) -> (u64, u64) {
    let mut it = chain.weights.iter().rev();
    let Some(&last) = it.next() else {
        return (1, 1);
    };
    let (mut p, mut q) = (-last, 1i64);
    for &w in it {
        (p, q) = (-w * p - q, p);
    }
    (p as u64, (p - q) as u64)
}

pub fn mld(t: &CyclicQuotientType, b: &Rational) -> Rational {
    let m = int(t.m as i64);
    let mk = int((t.m - t.k) as i64);
    (int(1) + mk * (int(1) - b)) / m
}

pub fn codiscrepancy(t: &CyclicQuotientType, b: &Rational) -> Rational {
    int(1) - mld(t, b)
}

/// `mld > 1/7` at `b = 6/7`, which reduces to `k < 7`.
pub fn is_one_seventh_lt(t: &CyclicQuotientType) -> bool {
    t.k < 7
}

pub fn series_of(t: &CyclicQuotientType) -> Result<(u64, u64), SingularityError> {
    if !is_one_seventh_lt(t) {
        return Err(SingularityError::NotLogTerminal(t.k));
    }
    Ok((t.m % t.k, t.k))
}

/// Lower bound `1 - c2/7` on the mld of a point on C.
pub fn mld_floor(c2: i64) -> Rational {
    int(1) - rat(c2, 7)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expand_examples() {
        assert_eq!(hj_expand(2, 1).unwrap().weights, vec![-2]);
        assert_eq!(hj_expand(5, 2).unwrap().weights, vec![-2, -3]);
        assert_eq!(hj_expand(7, 3).unwrap().weights, vec![-2, -4]);
        assert_eq!(hj_expand(4, 1).unwrap().weights, vec![-2, -2, -2]);
        assert_eq!(hj_expand(4, 2), Err(SingularityError::NotCoprime { m: 4, k: 2 }));
        assert_eq!(hj_expand(3, 3), Err(SingularityError::OutOfRange { m: 3, k: 3 }));
    }

    #[test]
    fn contract_examples() {
        let c = |w: Vec<i64>| hj_contract(&ResolutionChain::new(w).unwrap());
        assert_eq!(c(vec![-2]), (2, 1));
        assert_eq!(c(vec![-2, -2]), (3, 1));
        assert_eq!(c(vec![-3]), (3, 2));
        assert!(ResolutionChain::new(vec![-1]).is_err());
    }

    #[test]
    fn mld_values() {
        let a1 = CyclicQuotientType::new(2, 1).unwrap();
        assert_eq!(mld(&a1, &rat(6, 7)), rat(4, 7));
        assert_eq!(codiscrepancy(&a1, &rat(6, 7)), rat(3, 7));
        let t = CyclicQuotientType::new(7, 1).unwrap();
        assert_eq!(mld(&t, &rat(6, 7)), rat(13, 49));
        let t = CyclicQuotientType::new(7, 3).unwrap();
        assert_eq!(mld(&t, &rat(6, 7)), rat(11, 49));
        for m in 2..30 {
            assert_eq!(mld(&CyclicQuotientType::new(m, 1).unwrap(), &int(1)), rat(1, m as i64));
        }
    }

    #[test]
    fn scaled_types() {
        let t = CyclicQuotientType::with_boundary(2, 1, 2).unwrap();
        assert_eq!((t.m, t.k, t.d), (4, 2, 2));
        assert_eq!(t.underlying(), (2, 1));
        assert_eq!(t.chain().unwrap().weights, vec![-2]);
        assert_eq!(t.chain().unwrap().cq_type(), t);
        let smooth = CyclicQuotientType::with_boundary(1, 1, 3).unwrap();
        assert!(smooth.is_smooth());
        assert_eq!((smooth.m, smooth.k), (3, 3));
    }

    #[test]
    fn reversal() {
        let t = CyclicQuotientType::new(5, 2).unwrap();
        let r = t.reversed();
        assert_eq!((r.m, r.k), (5, 3));
        let mut w = t.chain().unwrap().weights;
        w.reverse();
        assert_eq!(hj_expand(5, 3).unwrap().weights, w);
    }

    #[test]
    fn series() {
        assert_eq!(series_of(&CyclicQuotientType::new(5, 2).unwrap()), Ok((1, 2)));
        assert_eq!(series_of(&CyclicQuotientType::new(7, 3).unwrap()), Ok((1, 3)));
        assert_eq!(
            series_of(&CyclicQuotientType::new(8, 7).unwrap()),
            Err(SingularityError::NotLogTerminal(7))
        );
    }
}
