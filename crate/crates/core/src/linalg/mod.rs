//! Exact integer and rational linear algebra.
//!
//! Matrices are plain row-major `Vec<Vec<T>>`. Functions that must handle
//! matrices with zero rows take the column count explicitly.

mod lattice;
mod normal_form;
mod rational;
mod solve;

pub use lattice::{lattice_index, quotient_coordinates, LatticeBasis, QuotientChart};
pub use normal_form::{hermite_normal_form, smith_normal_form, HermiteForm, SmithForm};
pub use rational::{
    clear_denominators, dot, dot_int, dot_qi, format_rational, int, is_primitive, parse_rational,
    primitive, rat, to_int_vec, to_qvec, IntMatrix, IntVec, Integer, QMatrix, QVec, Rational,
};
pub use solve::{
    det_int, det_q, identity_q, independent_rows, inverse_q, kernel_q, mat_mul_q, mat_vec_q, rank_q, rref,
    solve_rational, to_qmatrix, transpose,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("matrix is singular")]
    Singular,
    #[error("sublattice is not saturated (index {index})")]
    NotSaturated { index: Integer },
    #[error("vectors do not lie in the ambient lattice")]
    NotSublattice,
    #[error("sublattice has lower rank than the lattice, index is infinite")]
    InfiniteIndex,
    #[error("vectors are linearly dependent")]
    Dependent,
    #[error("malformed rational {0:?}")]
    MalformedRational(String),
}
