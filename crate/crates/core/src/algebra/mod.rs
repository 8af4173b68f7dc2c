//! Exact scalars, multivariate polynomials and linear algebra over ℚ and ℚ(i).

mod matrix;
mod poly;
mod polymatrix;
mod scalar;

use thiserror::Error;

pub use matrix::{
    complement_projector, intersect, is_zero_vec, orth_complement, reduce_basis, same_span,
    Rref, ScalarMatrix,
};
pub use poly::{MultiIndex, MultiPoly, TermOrder};
pub use polymatrix::{subsets, PolyMatrix};
pub use scalar::{rat, rat_int, rational_to_f64, Field, GaussianRational, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("polynomials live in different rings ({left} vs {right} variables)")]
    VariableMismatch { left: usize, right: usize },
    #[error("{context}: incompatible shapes {left:?} and {right:?}")]
    DimensionMismatch {
        context: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("minor size {size} out of range for a {rows}x{cols} matrix")]
    MinorSizeOutOfRange { size: usize, rows: usize, cols: usize },
}
