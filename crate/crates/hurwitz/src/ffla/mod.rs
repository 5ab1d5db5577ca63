//! Finite-field linear algebra: field contexts for GF(q) with q = p^n ≤ 2^16,
//! dense matrices, minimal polynomials, exact element orders, and Jordan
//! partitions of unipotent elements.

pub mod field;
pub mod matrix;
pub mod poly;
pub mod intfactor;
pub mod order;

pub use field::FieldCtx;
pub use matrix::MatrixGF;
pub use poly::Poly;

use num_bigint::BigUint;
use thiserror::Error;

/// Errors from the linear-algebra layer.
#[derive(Debug, Error)]
pub enum FflaError {
    #[error("unsupported field order {q}: must be a prime power p^n ≤ 2^16")]
    UnsupportedField { q: u64 },
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("element is not unipotent (expected order a power of the field characteristic)")]
    NotUnipotent,
    #[error(
        "integer factorization budget exhausted while factoring {n}; \
         increase the budget via order-computation options, or supply the \
         factorization externally"
    )]
    FactorBudget { n: String },
}

/// Matrix product. Panics on dimension or field mismatch.
pub fn mat_mul(a: &MatrixGF, b: &MatrixGF) -> MatrixGF {
    a.mul(b)
}

/// Dimension of the right kernel `{ v : m·v = 0 }`.
pub fn kernel_dim(m: &MatrixGF) -> usize {
    m.kernel_dim()
}

/// Dimension of the fixed space `{ v : g·v = v }` of a square matrix.
pub fn fixed_space_dim(g: &MatrixGF) -> usize {
    g.fixed_space_dim()
}

/// Exact multiplicative order of an invertible matrix.
pub fn element_order(g: &MatrixGF) -> Result<BigUint, FflaError> {
    order::element_order(g)
}

/// Jordan block sizes (descending) of a unipotent matrix.
pub fn jordan_partition(g: &MatrixGF) -> Result<Vec<u32>, FflaError> {
    matrix::jordan_partition(g)
}

/// Minimal polynomial of a square matrix, monic.
pub fn min_poly(g: &MatrixGF) -> Poly {
    poly::min_poly(g)
}
