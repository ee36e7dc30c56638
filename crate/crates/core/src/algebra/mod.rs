//! Exact scalars, constant matrices and Lie-algebra structure data.

mod lie;
mod matrix;
mod scalar;

pub use lie::{solve_in_span, structure_constants, LieBasis};
pub use matrix::{commutator, const_inverse, trace, ConstMatrix};
pub use scalar::GaussianRational;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("singular matrix")]
    Singular,
    #[error("division by zero")]
    DivisionByZero,
    #[error("basis is not closed: [tau{0}, tau{1}] leaves the span")]
    NotClosed(usize, usize),
    #[error("basis is linearly dependent")]
    LinearlyDependent,
    #[error("basis element tau{0} is not traceless")]
    NotTraceless(usize),
    #[error("empty basis")]
    EmptyBasis,
    #[error("malformed scalar {0:?}")]
    BadScalar(String),
}
