//! Rational polyhedral cones of nilpotents, fans, and the rank-two
//! decomposition of `η⁺(S)` obtained from reduction of binary forms.

mod binary_form;
mod cone;
mod fan;
mod sigma;

use thiserror::Error;

use crate::linalg::LinalgError;
use crate::symplectic::SymplecticError;

pub use binary_form::{in_sigma0, is_unimodular, reduce_binary_form, sigma0_coords, Reduction, SymCone};
pub use cone::{flatten, primitive, Cone, ConeKey};
pub use fan::{validate_fan, Fan, FanValidation, FanViolation};
pub use sigma::{
    build_sigma_s, check_gamma_compatibility, embed_gl, filter_sigma_ev, gl2_generators,
    gl2_words, standard_sigma0, sym_cone_to_eta, Compatibility,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FanError {
    #[error("generators live in different symplectic spaces")]
    SpaceMismatch,
    #[error("cone contains a line")]
    NotPointed,
    #[error("matrix is not symmetric of the expected size")]
    NotSymmetric,
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("matrix is not in GL(m, Z)")]
    NotUnimodular,
    #[error("group generator is not symplectic")]
    NotSymplectic,
    #[error("Sym({found}) cone for an isotropic subspace of dimension {expected}")]
    RankMismatch { expected: usize, found: usize },
    #[error("no fan construction for dim S = {0}")]
    UnsupportedRank(usize),
    #[error("cone {0} is not contained in any eta(S)")]
    NotInEta(usize),
    #[error(transparent)]
    Symplectic(#[from] SymplecticError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
