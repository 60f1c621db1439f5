//! n-complements: construction by grid search over tracked curves and
//! verification of a given certificate.
//!
//! A certificate `B+` for `(S, B)` passes when `n B+` is integral,
//! `n (K + B+)` is numerically trivial, `K + B+` is log canonical and
//! `B+` dominates `floor((n+1) B) / n` coefficientwise. Triviality is
//! checked numerically; linear equivalence is not decidable from the graph.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::graph::{VertexClass, VertexId};
use crate::intersection::{self, SurfaceDivisor};
use crate::pair::{LogPair, PairError};
use crate::rational::{self, format, int, rat, Rational};

/// `floor((n+1) b) / n`.
pub fn bump_coefficient(b: &Rational, n: u32) -> Rational {
    let n = i64::from(n);
    Rational::new(rational::floor(&(b * int(n + 1))), BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplementCertificate {
    pub n: u32,
    /// Full boundary `B+`, C included.
    pub plus_coefficients: BTreeMap<VertexId, Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplementReport {
    pub n: u32,
    pub integral: bool,
    pub degree_zero: bool,
    pub log_canonical: bool,
    pub dominates: bool,
    /// Always "numerical".
    pub triviality: &'static str,
    pub failures: Vec<String>,
}

impl ComplementReport {
    pub fn passed(&self) -> bool {
        self.integral && self.degree_zero && self.log_canonical && self.dominates
    }
}

/// Log canonicity of `K + B+` along the tracked curves: coefficients at
/// most 1, exceptional coefficients at most 1, and at a simple tangency with
/// C the two coefficients sum to at most 3/2.
fn log_canonical(p: &LogPair, plus: &BTreeMap<VertexId, Rational>) -> Result<Vec<String>, PairError> {
    let mut out = Vec::new();
    let one = int(1);
    for (&v, q) in plus {
        if *q > one {
            out.push(format!("{} has coefficient {} > 1", p.graph.label(v), format(q)));
        }
    }
    let crep = intersection::crepant_pullback(&p.graph, plus)?;
    for (&v, e) in &crep.coefficients {
        if *e > one {
            out.push(format!("exceptional {} has coefficient {} > 1", p.graph.label(v), format(e)));
        }
    }
    let bc = plus.get(&p.c).cloned().unwrap_or_else(Rational::zero);
    for (v, m) in p.graph.neighbors(p.c) {
        if m == 2 && p.graph.vertex(v).is_some_and(|x| x.class() != VertexClass::Black) {
            let q = plus.get(&v).cloned().unwrap_or_else(Rational::zero);
            if q.is_positive() && &bc + &q > rat(3, 2) {
                out.push(format!("tangency of C and {} not log canonical", p.graph.label(v)));
            }
        }
    }
    Ok(out)
}

pub fn verify_complement(
    p: &LogPair,
    cert: &ComplementCertificate,
) -> Result<ComplementReport, PairError> {
    let n = cert.n;
    let nq = int(i64::from(n));
    let mut failures = Vec::new();

    let integral = cert
        .plus_coefficients
        .values()
        .all(|q| rational::is_integral(&(q * &nq)));
    if !integral {
        failures.push(format!("{n}B+ is not integral"));
    }

    let d = SurfaceDivisor::log_canonical(&cert.plus_coefficients);
    let deg = intersection::degree_vs_curve(&p.graph, &d, p.c)?;
    let degree_zero = deg.is_zero();
    if !degree_zero {
        failures.push(format!("(K+B+).C = {}", format(&deg)));
    }

    let lc = log_canonical(p, &cert.plus_coefficients)?;
    let log_canonical = lc.is_empty();
    failures.extend(lc);

    let mut dominates = true;
    for (v, q) in p.full_boundary() {
        let need = bump_coefficient(&q, n);
        let have = cert.plus_coefficients.get(&v).cloned().unwrap_or_else(Rational::zero);
        if have < need {
            dominates = false;
            failures.push(format!(
                "{}: {} below bumped {}",
                p.graph.label(v),
                format(&have),
                format(&need)
            ));
        }
    }

    Ok(ComplementReport {
        n,
        integral,
        degree_zero,
        log_canonical,
        dominates,
        triviality: "numerical",
        failures,
    })
}

/// Searches `j/n` coefficients on C and the white curves, each at least
/// its bumped value; C varies slowest, then whites in id order, values
/// ascending. Only degree-zero candidates are checked for log canonicity.
pub fn find_complement(p: &LogPair, n: u32) -> Result<Option<ComplementCertificate>, PairError> {
    let g = &p.graph;
    let mut support = vec![p.c];
    support.extend(g.whites());
    for &v in p.boundary.keys() {
        if !support.contains(&v) {
            support.push(v);
        }
    }
    let nn = i64::from(n);
    let boundary = p.full_boundary();
    let lows: Vec<i64> = support
        .iter()
        .map(|v| {
            let b = bump_coefficient(boundary.get(v).unwrap_or(&Rational::zero()), n) * int(nn);
            rational::to_i64(&b).unwrap_or(0)
        })
        .collect();
    let base = intersection::degree_vs_curve(g, &SurfaceDivisor::canonical(), p.c)?;
    let degs: Vec<Rational> = support
        .iter()
        .map(|&v| intersection::degree_vs_curve(g, &SurfaceDivisor::curve(v), p.c))
        .collect::<Result<_, _>>()?;

    let mut js = lows.clone();
    loop {
        let mut deg = base.clone();
        for (j, d) in js.iter().zip(&degs) {
            deg += d * rat(*j, nn);
        }
        if deg.is_zero() {
            let plus: BTreeMap<VertexId, Rational> = support
                .iter()
                .zip(&js)
                .filter(|(_, &j)| j != 0)
                .map(|(&v, &j)| (v, rat(j, nn)))
                .collect();
            let cert = ComplementCertificate { n, plus_coefficients: plus };
            if verify_complement(p, &cert)?.passed() {
                return Ok(Some(cert));
            }
        }
        // odometer, last position fastest
        let mut i = js.len();
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            if js[i] < nn {
                js[i] += 1;
                for k in i + 1..js.len() {
                    js[k] = lows[k];
                }
                break;
            }
        }
    }
}
