//! Exact linear algebra over the rationals.
//!
//! Everything downstream reduces to finite-dimensional problems over ℚ:
//! ranks, kernels, solvability of linear systems and the cohomology of
//! finite windows of cochain complexes. All arithmetic is exact.

mod complex;
mod matrix;

pub use complex::{CohomologyReport, ComplexWindow, DegreeCohomology};
pub use matrix::{
    determinant, inverse, rank, rank_kernel, solve, EchelonBasis, SparseMatrix, Vector,
};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

/// Exact rational scalar. Always stored in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// `(-1)^k` for a parity flag.
pub fn sign(negative: bool) -> Rational {
    if negative {
        -one()
    } else {
        one()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("d∘d is nonzero between degrees {0} and {1}")]
    DSquaredNonzero(i64, i64),
    #[error("matrix is not square ({0}×{1})")]
    NotSquare(usize, usize),
}
