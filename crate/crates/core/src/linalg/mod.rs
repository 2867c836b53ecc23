//! Exact linear algebra over ℚ and ℚ(i).
//!
//! Everything downstream (symplectic forms, filtrations, cones) is expressed
//! through the dense [`Matrix`] and canonical [`Subspace`] types defined here.
//! There is no floating point anywhere in the crate.

mod lattice;
mod matrix;
mod scalar;
mod subspace;

use num_traits::{Signed, Zero};
use thiserror::Error;

pub use lattice::{saturated_basis, solve_integral};
pub use matrix::{
    dot, to_gauss_vec, unit_vector, vec_add, vec_conj, vec_scale, vec_sub, GaussMatrix, Matrix,
    RatMatrix,
};
pub use scalar::{
    format_rational, gauss, parse_rational, rat, ratio, Field, GaussRational, Rational,
};
pub use subspace::{kernel_image, GaussSubspace, RatSubspace, Subspace, SubspaceOps};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("matrix is not Hermitian")]
    NotHermitian,
}

/// Decides positive definiteness of a Hermitian matrix over ℚ(i).
///
/// Symmetric Gaussian elimination without pivot search: the form is positive
/// definite iff every pivot met along the diagonal is a positive rational.
/// The empty matrix is positive definite.
pub fn is_positive_definite(g: &GaussMatrix) -> Result<bool, LinalgError> {
    if !g.is_hermitian() {
        return Err(LinalgError::NotHermitian);
    }
    let n = g.rows();
    let mut a = g.clone();
    for k in 0..n {
        let pivot = a[(k, k)].clone();
        // Hermitian elimination keeps the diagonal real.
        debug_assert!(pivot.is_real());
        if !pivot.re.is_positive() {
            return Ok(false);
        }
        for i in (k + 1)..n {
            if a[(i, k)].is_zero() {
                continue;
            }
            let f = a[(i, k)].clone() / &pivot;
            for j in (k + 1)..n {
                if a[(k, j)].is_zero() {
                    continue;
                }
                let delta = f.clone() * &a[(k, j)];
                let v = std::mem::replace(&mut a[(i, j)], GaussRational::zero());
                a[(i, j)] = v - delta;
            }
        }
    }
    Ok(true)
}

/// Positive definiteness of a real symmetric matrix.
pub fn is_positive_definite_real(g: &RatMatrix) -> Result<bool, LinalgError> {
    is_positive_definite(&g.to_gauss())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_positive() {
        assert!(is_positive_definite_real(&RatMatrix::identity(2)).unwrap());
    }

    #[test]
    fn semidefinite_is_rejected() {
        let g = RatMatrix::from_i64(2, 2, &[1, -1, -1, 1]);
        assert!(!is_positive_definite_real(&g).unwrap());
    }

    #[test]
    fn leading_minors_two_and_three() {
        let g = RatMatrix::from_i64(2, 2, &[2, -1, -1, 2]);
        assert!(is_positive_definite_real(&g).unwrap());
    }

    #[test]
    fn non_hermitian_is_an_error() {
        let g = RatMatrix::from_i64(2, 2, &[1, 2, 0, 1]);
        assert_eq!(
            is_positive_definite_real(&g),
            Err(LinalgError::NotHermitian)
        );
        let h = GaussMatrix::from_vec(1, 1, vec![gauss(1, 1)]).unwrap();
        assert_eq!(is_positive_definite(&h), Err(LinalgError::NotHermitian));
    }

    #[test]
    fn complex_hermitian() {
        // [[2, i], [-i, 2]] has minors 2 and 3.
        let g = GaussMatrix::from_vec(2, 2, vec![gauss(2, 0), gauss(0, 1), gauss(0, -1), gauss(2, 0)])
            .unwrap();
        assert!(is_positive_definite(&g).unwrap());
        let h = GaussMatrix::from_vec(2, 2, vec![gauss(1, 0), gauss(0, 1), gauss(0, -1), gauss(1, 0)])
            .unwrap();
        assert!(!is_positive_definite(&h).unwrap());
    }

    #[test]
    fn empty_matrix_is_positive() {
        assert!(is_positive_definite(&GaussMatrix::zeros(0, 0)).unwrap());
    }
}
