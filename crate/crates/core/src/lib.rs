//! Dual-graph calculus and exhaustive classification of rank-one log del
//! Pezzo pairs whose boundary contains an elliptic curve.
//!
//! Everything is exact: intersection numbers are integers, discrepancies and
//! coefficients are arbitrary-precision rationals.

pub mod complement;
pub mod enumerate;
pub mod graph;
pub mod intersection;
pub mod linalg;
pub mod pair;
pub mod rational;
pub mod singularity;
pub mod table;

pub use graph::{DualGraph, VertexClass, VertexId, VertexRole};
pub use rational::{rat, Rational};

#[cfg(test)]
mod properties;
