//! Exact linear algebra over the Gaussian rationals.

mod hermitian;
mod matrix;
pub mod poly;
mod scalar;
mod subspace;

pub use hermitian::{is_positive_definite_hermitian, sylvester, Positivity};
pub use matrix::{Matrix, Rref};
pub use scalar::Scalar;
pub use subspace::{image, intersect, kernel, quotient_basis, sum, Subquotient, Subspace};

/// Reduced row echelon form and rank.
pub fn rref(m: &Matrix) -> (Matrix, usize) {
    let r = m.rref();
    (r.matrix, r.rank)
}
