//! Exact-arithmetic Hilbert functions and Hilbert polynomials of bigraded
//! algebras generated in bidegrees (1,0), (d_1,1), ..., (d_r,1): quotients of
//! bigraded polynomial rings and Rees algebras of homogeneous ideals.
//!
//! The crate is organized around a dual-route design: every closed-form
//! quantity (leading coefficients, mixed multiplicities, decomposition
//! Hilbert functions) has an independent brute-force counterpart built from
//! monomial counting and exact linear algebra, and the two are checked
//! against each other cell by cell and coefficient by coefficient.
//!
//! All arithmetic is exact: rationals backed by arbitrary-precision integers
//! in the core, word-size modular arithmetic only as a verified fast path
//! for rank computations.

pub mod algebra;
pub mod catalog;
pub mod closed;
pub mod combin;
pub mod diagonal;
pub mod fit;
pub mod io;
pub mod linalg;
pub mod oracle;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("variable count mismatch: {0} vs {1}")]
    VariableMismatch(usize, usize),
    #[error("singular matrix: {0}")]
    SingularMatrix(String),
    #[error("prime {0} divides a denominator; retry with another prime")]
    UnluckyPrime(u64),
    #[error("cell ({u},{v}) skipped: {reason}")]
    CellBudget { u: i64, v: i64, reason: String },
    #[error("rank budget exceeded: {0}")]
    RankBudget(String),
    #[error("no stabilization found within budget: {0}")]
    Stabilization(String),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("invalid colon data: {0}")]
    InvalidColonData(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("parse error at offset {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("serialization error: {0}")]
    Serialize(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
