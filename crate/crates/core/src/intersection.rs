//! Intersection numbers on the contracted surface, computed on the minimal
//! resolution through numerical pullbacks.
//!
//! The exceptional locus of the contraction is the set of black vertices.
//! A divisor on the contracted surface is a rational combination of `K` and
//! the non-exceptional vertices; its pullback adds the unique exceptional
//! part that is orthogonal to every exceptional curve.

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::graph::{DualGraph, VertexClass, VertexId};
use crate::linalg::{self, LinalgError};
use crate::rational::{int, is_integral, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntersectionError {
    #[error("singular exceptional system: {0}")]
    SingularSystem(#[from] LinalgError),
    #[error("{0} has coefficient {1} > 1: not log canonical")]
    NonLogCanonical(VertexId, String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionMatrix {
    pub ids: Vec<VertexId>,
    pub entries: Vec<Vec<i64>>,
}

impl IntersectionMatrix {
    pub fn to_rational(&self) -> Vec<Vec<Rational>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect()
    }

    pub fn determinant(&self) -> Rational {
        linalg::determinant(&self.to_rational())
    }

    pub fn is_negative_definite(&self) -> bool {
        linalg::is_negative_definite(&self.to_rational())
    }
}

pub fn intersection_matrix(g: &DualGraph, subset: &[VertexId]) -> IntersectionMatrix {
    IntersectionMatrix {
        ids: subset.to_vec(),
        entries: subset
            .iter()
            .map(|&a| subset.iter().map(|&b| g.intersection(a, b)).collect())
            .collect(),
    }
}

pub fn exceptional_matrix(g: &DualGraph) -> IntersectionMatrix {
    intersection_matrix(g, &g.blacks())
}

/// `K.v = 2 p_a(v) - 2 - v^2`.
pub fn canonical_degree(g: &DualGraph, v: VertexId) -> i64 {
    let x = g.vertex(v).expect("vertex of this graph");
    2 * i64::from(x.arithmetic_genus()) - 2 - x.weight
}

/// `K^2` on a resolution obtained from a minimal rational ruled surface by
/// `blowup_count` blow-ups.
pub fn canonical_square(g: &DualGraph) -> i64 {
    8 - i64::from(g.blowup_count())
}

/// `k*K + sum parts[v]*v`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SurfaceDivisor {
    pub k: Rational,
    pub parts: BTreeMap<VertexId, Rational>,
}

impl SurfaceDivisor {
    pub fn canonical() -> Self {
        Self { k: int(1), parts: BTreeMap::new() }
    }

    pub fn curve(v: VertexId) -> Self {
        Self::zero().plus(v, int(1))
    }

    pub fn zero() -> Self {
        Self { k: Rational::zero(), parts: BTreeMap::new() }
    }

    /// `K + sum coef*v`.
    pub fn log_canonical(boundary: &BTreeMap<VertexId, Rational>) -> Self {
        Self { k: int(1), parts: boundary.clone() }
    }

    pub fn plus(mut self, v: VertexId, c: Rational) -> Self {
        let e = self.parts.entry(v).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.parts.remove(&v);
        }
        self
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self {
            k: &self.k * q,
            parts: self
                .parts
                .iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(&v, c)| (v, c * q))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.k += &other.k;
        for (&v, c) in &other.parts {
            out = out.plus(v, c.clone());
        }
        out
    }

    pub fn coefficient(&self, v: VertexId) -> Rational {
        self.parts.get(&v).cloned().unwrap_or_else(Rational::zero)
    }
}

/// Intersection form on the resolution itself.
pub fn intersect_resolution(g: &DualGraph, a: &SurfaceDivisor, b: &SurfaceDivisor) -> Rational {
    let mut s = &a.k * &b.k * int(canonical_square(g));
    for (&v, c) in &b.parts {
        s += &a.k * c * int(canonical_degree(g, v));
    }
    for (&v, c) in &a.parts {
        s += &b.k * c * int(canonical_degree(g, v));
    }
    for (&u, cu) in &a.parts {
        for (&v, cv) in &b.parts {
            let uv = g.intersection(u, v);
            if uv != 0 {
                s += cu * cv * int(uv);
            }
        }
    }
    s
}

/// Numerical pullback: the exceptional parts of `d` are replaced by the
/// coefficients making the result orthogonal to every black vertex.
pub fn pullback(g: &DualGraph, d: &SurfaceDivisor) -> Result<SurfaceDivisor, IntersectionError> {
    let bl = g.blacks();
    let mut base = d.clone();
    base.parts
        .retain(|&v, _| g.vertex(v).is_some_and(|x| x.class() != VertexClass::Black));
    if bl.is_empty() {
        return Ok(base);
    }
    let m = exceptional_matrix(g).to_rational();
    let rhs: Vec<Rational> = bl
        .iter()
        .map(|&e| -intersect_resolution(g, &base, &SurfaceDivisor::curve(e)))
        .collect();
    let x = linalg::solve(&m, &rhs)?;
    for (e, c) in bl.into_iter().zip(x) {
        base = base.plus(e, c);
    }
    Ok(base)
}

/// Intersection number of two divisors on the contracted surface.
pub fn intersect(
    g: &DualGraph,
    a: &SurfaceDivisor,
    b: &SurfaceDivisor,
) -> Result<Rational, IntersectionError> {
    let pa = pullback(g, a)?;
    let mut bb = b.clone();
    bb.parts
        .retain(|&v, _| g.vertex(v).is_some_and(|x| x.class() != VertexClass::Black));
    Ok(intersect_resolution(g, &pa, &bb))
}

pub fn degree_vs_curve(
    g: &DualGraph,
    d: &SurfaceDivisor,
    test_curve: VertexId,
) -> Result<Rational, IntersectionError> {
    intersect(g, d, &SurfaceDivisor::curve(test_curve))
}

/// `(f_* E)^2 = E . f^* f_* E`.
pub fn pushforward_self_intersection(
    g: &DualGraph,
    v: VertexId,
) -> Result<Rational, IntersectionError> {
    let e = SurfaceDivisor::curve(v);
    intersect(g, &e, &e)
}

/// A Weil divisor is Cartier iff its pullback is integral.
pub fn is_cartier(g: &DualGraph, d: &SurfaceDivisor) -> Result<bool, IntersectionError> {
    let p = pullback(g, d)?;
    Ok(is_integral(&p.k) && p.parts.values().all(is_integral))
}

/// Exceptional coefficients `e_j` of the pullback of `K + B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrepantData {
    pub coefficients: BTreeMap<VertexId, Rational>,
}

impl CrepantData {
    pub fn get(&self, v: VertexId) -> Rational {
        self.coefficients.get(&v).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn max(&self) -> Option<&Rational> {
        self.coefficients.values().max()
    }

    pub fn check_log_canonical(&self) -> Result<(), IntersectionError> {
        match self.coefficients.iter().find(|(_, c)| **c > int(1)) {
            Some((&v, c)) => Err(IntersectionError::NonLogCanonical(v, crate::rational::format(c))),
            None => Ok(()),
        }
    }
}

pub fn crepant_pullback(
    g: &DualGraph,
    boundary: &BTreeMap<VertexId, Rational>,
) -> Result<CrepantData, IntersectionError> {
    let p = pullback(g, &SurfaceDivisor::log_canonical(boundary))?;
    let bl = g.blacks();
    Ok(CrepantData {
        coefficients: bl.into_iter().map(|e| (e, p.coefficient(e))).collect(),
    })
}
