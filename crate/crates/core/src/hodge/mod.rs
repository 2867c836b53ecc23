//! Hodge filtrations of weight −1 on `(H, Q)`, limiting mixed Hodge
//! structures of nilpotent cones with `N² = 0`, and the maps between
//! boundary points of `D` and of the Siegel space.

mod filtration;
mod maps;
mod orbit;
mod split;
mod splitting;
mod weight;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::fans::FanError;
use crate::linalg::LinalgError;
use crate::symplectic::SymplecticError;

pub use filtration::{d_membership, is_in_compact_dual, is_in_d, DMembership, Filtration};
pub use maps::{
    breve_lift, fiber_point, graded_hodge_numbers, graded_piece, hermitian_gram_schmidt,
    same_orbit, tilde_map, tilde_map_odd,
};
pub use orbit::{
    check_nilpotent_orbit, classify_cone, cone_weight_filtration, splitting_parity,
    BoundaryPoint, ConeType, OrbitReport, Parity,
};
pub use split::SplitOrbitSpec;
pub use splitting::{deligne_splitting, DeligneSplitting, SplittingInvariants};
pub use weight::{check_mhs, weight_filtration, WeightFiltration};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HodgeError {
    #[error("filtration has no steps")]
    EmptyFiltration,
    #[error("filtration indices must be consecutive")]
    NotContiguous,
    #[error("F^{0} does not contain the next step")]
    NotNested(i32),
    #[error("dim F^{p} = {found}, expected {expected}")]
    DimensionMismatch { p: i32, expected: usize, found: usize },
    #[error("ambient dimension mismatch")]
    AmbientMismatch,
    #[error("Hodge numbers are not symmetric under p -> -1-p")]
    AsymmetricHodgeNumbers,
    #[error("Hodge numbers sum to {found}, expected {expected}")]
    HodgeRank { expected: usize, found: usize },
    #[error("not a nonzero nilpotent")]
    ZeroNilpotent,
    #[error("type III nilpotent: N^3 != 0")]
    TypeThree,
    #[error("nilpotent with N^2 != 0")]
    NotSquareZero,
    #[error("(W, F) is not a mixed Hodge structure")]
    NotMixedHodgeStructure,
    #[error("weight filtration has graded pieces outside weights 0, -1, -2")]
    WeightsOutOfRange,
    #[error("lift obstructed: dim Im N = {m} > h^(0,-1) = {h01}")]
    Obstruction { m: usize, h01: usize },
    #[error("not a nilpotent orbit: {0}")]
    NotNilpotentOrbit(String),
    #[error("classification paths disagree: {0}")]
    InconsistentClassification(String),
    #[error("cone is neither even nor odd type")]
    NeitherType,
    #[error("Hermitian form is not positive definite")]
    IndefiniteForm,
    #[error("invalid split-orbit data: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Symplectic(#[from] SymplecticError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Fan(#[from] FanError),
}

/// Hodge numbers `h^{p,−p−1}` of a weight −1 structure, keyed by `p`.
/// Only nonzero entries are stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HodgeNumbers {
    h: BTreeMap<i32, usize>,
}

impl HodgeNumbers {
    pub fn new(h: BTreeMap<i32, usize>) -> Result<Self, HodgeError> {
        let h: BTreeMap<i32, usize> = h.into_iter().filter(|(_, v)| *v > 0).collect();
        for (&p, &v) in &h {
            if h.get(&(-1 - p)).copied().unwrap_or(0) != v {
                return Err(HodgeError::AsymmetricHodgeNumbers);
            }
        }
        Ok(HodgeNumbers { h })
    }

    pub fn from_pairs(pairs: &[(i32, usize)]) -> Result<Self, HodgeError> {
        Self::new(pairs.iter().copied().collect())
    }

    /// `h^{0,−1} = h^{−1,0} = n`.
    pub fn siegel(n: usize) -> Self {
        Self::from_pairs(&[(0, n), (-1, n)]).expect("symmetric")
    }

    /// `(1, 1, 1, 1)` on `p = 1, 0, −1, −2`.
    pub fn weil_1111() -> Self {
        Self::from_pairs(&[(1, 1), (0, 1), (-1, 1), (-2, 1)]).expect("symmetric")
    }

    pub fn get(&self, p: i32) -> usize {
        self.h.get(&p).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> &BTreeMap<i32, usize> {
        &self.h
    }

    /// `h^{0,−1}`.
    pub fn h01(&self) -> usize {
        self.get(0)
    }

    /// `Σ_p h^{p,−p−1} = 2n`.
    pub fn total(&self) -> usize {
        self.h.values().sum()
    }

    /// `dim F^p = Σ_{r ≥ p} h^{r,−r−1}`.
    pub fn f_dim(&self, p: i32) -> usize {
        self.h.range(p..).map(|(_, v)| v).sum()
    }

    /// Smallest and largest `p` with `h^{p,−p−1} ≠ 0`.
    pub fn range(&self) -> Option<(i32, i32)> {
        Some((*self.h.keys().next()?, *self.h.keys().next_back()?))
    }

    /// Checks `Σ h = 2n`.
    pub fn check_rank(&self, n: usize) -> Result<(), HodgeError> {
        if self.total() != 2 * n {
            return Err(HodgeError::HodgeRank {
                expected: 2 * n,
                found: self.total(),
            });
        }
        Ok(())
    }

    /// Level-one numbers, i.e. the Siegel case.
    pub fn is_siegel(&self) -> bool {
        self.h.keys().all(|&p| p == 0 || p == -1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hodge_numbers_validate() {
        let h = HodgeNumbers::weil_1111();
        assert_eq!(h.total(), 4);
        assert_eq!(h.f_dim(1), 1);
        assert_eq!(h.f_dim(-1), 3);
        assert_eq!(h.f_dim(-5), 4);
        assert_eq!(h.range(), Some((-2, 1)));
        assert!(HodgeNumbers::from_pairs(&[(1, 1), (0, 1)]).is_err());
        assert!(HodgeNumbers::siegel(3).is_siegel());
        assert!(!h.is_siegel());
        assert_eq!(h.check_rank(3), Err(HodgeError::HodgeRank { expected: 6, found: 4 }));
    }
}
