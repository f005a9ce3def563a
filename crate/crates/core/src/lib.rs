//! Exact computation of the complex K-ring of flip Stiefel manifolds
//! FV_{m,2s} through the Hodgkin spectral sequence: representation-ring
//! restriction data, a two-generator Koszul complex over a finite-rank
//! ring, and verification of the resulting presentation.

pub mod clifford;
pub mod exact_core;
pub mod intlinalg;
pub mod koszul;
pub mod presentation;
pub mod repring;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("gcd of an empty or all-zero list is undefined")]
    UndefinedGcd,
    #[error("row is not primitive (gcd ≠ 1)")]
    NotPrimitive,
    #[error("2-adic valuation of zero")]
    ZeroValuation,
    #[error("relation lies outside the generated lattice")]
    SpanViolation,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error("Clifford algebra: {0}")]
    Clifford(String),
    #[error("index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("{0}")]
    NotACycle(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}
