//! Exact arithmetic: rationals, polynomials in derivative symbols, and dense
//! rational and polynomial matrices.

mod expr;
mod poly;
mod qmatrix;
mod symmatrix;

use thiserror::Error;

pub use expr::{parse_poly, ExprError};
pub use poly::{poly_equal_factored, DerivSymbol, LinForm, Monomial, Poly};
pub use qmatrix::{rank_of, QMatrix};
pub use symmatrix::SymMatrix;

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NonSquare { rows: usize, cols: usize },
}

/// Shorthand for an integer rational.
pub fn q(v: i64) -> Rational {
    Rational::from_integer(v.into())
}
