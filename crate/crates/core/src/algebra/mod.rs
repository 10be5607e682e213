//! Exact arithmetic over a prime field Z_p: elements, polynomials and dense
//! matrices.

mod field;
mod matrix;
mod poly;

pub use field::{mod_inverse, FieldElement, PrimeModulus, MAX_MODULUS};
pub use matrix::{determinant, minor_determinant, solve_linear_system, MatrixZp, Solution};
pub use poly::{interpolate_at, lagrange_interpolate, poly_divide, poly_eval, Polynomial};

/// Why a linear system has no unique solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularKind {
    Inconsistent,
    Underdetermined,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("{0} is not a supported prime modulus (need an odd prime up to 2^31 - 1)")]
    InvalidModulus(u64),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },
    #[error("division by the zero polynomial")]
    DivisionByZeroPolynomial,
    #[error("duplicate interpolation abscissa {0}")]
    DuplicateAbscissa(u64),
    #[error("interpolation needs at least one point")]
    EmptyInterpolation,
    #[error("matrix is {rows}x{cols}, expected square")]
    NonSquare { rows: usize, cols: usize },
    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("singular system ({0:?})")]
    SingularSystem(SingularKind),
}
