use std::collections::BTreeMap;

use super::{check_mhs, Filtration, HodgeError, WeightFiltration};
use crate::linalg::{GaussSubspace, Subspace};

/// The Deligne bigrading `H_ℂ = ⊕ I^{p,q}` of a mixed Hodge structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeligneSplitting {
    ambient: usize,
    pieces: BTreeMap<(i32, i32), GaussSubspace>,
}

/// Outcome of the four structural checks on a splitting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplittingInvariants {
    pub direct_sum: bool,
    pub weight: bool,
    pub hodge: bool,
    pub conjugation: bool,
}

impl SplittingInvariants {
    pub fn all(&self) -> bool {
        self.direct_sum && self.weight && self.hodge && self.conjugation
    }
}

impl DeligneSplitting {
    /// `I^{p,q}`, zero when absent.
    pub fn get(&self, p: i32, q: i32) -> GaussSubspace {
        self.pieces
            .get(&(p, q))
            .cloned()
            .unwrap_or_else(|| Subspace::zero(self.ambient))
    }

    /// Nonzero pieces keyed by `(p, q)`.
    pub fn pieces(&self) -> &BTreeMap<(i32, i32), GaussSubspace> {
        &self.pieces
    }

    /// `i^{p,q} = dim I^{p,q}`, nonzero entries only.
    pub fn dims(&self) -> BTreeMap<(i32, i32), usize> {
        self.pieces.iter().map(|(&k, v)| (k, v.dim())).collect()
    }

    /// `Σ` of the pieces selected by `keep`.
    pub fn sum_where(&self, keep: impl Fn(i32, i32) -> bool) -> GaussSubspace {
        let mut acc = Subspace::zero(self.ambient);
        for (&(p, q), v) in &self.pieces {
            if keep(p, q) {
                acc = acc.sum(v).expect("same ambient");
            }
        }
        acc
    }

    /// Checks direct sum, reconstruction of `W` and `F`, and
    /// `conj(I^{p,q}) ≡ I^{q,p}` modulo `⊕_{r<q, s<p} I^{r,s}`.
    pub fn invariants(&self, w: &WeightFiltration, f: &Filtration) -> SplittingInvariants {
        let total: usize = self.pieces.values().map(|v| v.dim()).sum();
        let direct_sum =
            total == self.ambient && self.sum_where(|_, _| true).dim() == self.ambient;
        let kmin = self.pieces.keys().map(|(p, q)| p + q).min().unwrap_or(0);
        let kmax = self.pieces.keys().map(|(p, q)| p + q).max().unwrap_or(0);
        let weight = w
            .weights()
            .into_iter()
            .chain(kmin - 1..=kmax + 1)
            .all(|k| self.sum_where(|p, q| p + q <= k) == w.get_complex(k));
        let pmin = self.pieces.keys().map(|k| k.0).min().unwrap_or(0);
        let pmax = self.pieces.keys().map(|k| k.0).max().unwrap_or(0);
        let (s, e) = (f.start(), f.end());
        let hodge = (pmin.min(s - 1)..=pmax.max(e) + 1)
            .all(|l| self.sum_where(|p, _| p >= l) == f.get(l));
        let conjugation = self.pieces.iter().all(|(&(p, q), v)| {
            let modulus = self.sum_where(|r, s| r < q && s < p);
            let target = self.get(q, p).sum(&modulus).expect("same ambient");
            let image = v.conj().sum(&modulus).expect("same ambient");
            image == target
        });
        SplittingInvariants {
            direct_sum,
            weight,
            hodge,
            conjugation,
        }
    }
}

/// `I^{p,q} = F^p ∩ W_k ∩ (conj F^q ∩ W_k + Σ_{j≥2} conj F^{q−j+1} ∩ W_{k−j})`
/// with `k = p + q`.
pub fn deligne_splitting(
    w: &WeightFiltration,
    f: &Filtration,
) -> Result<DeligneSplitting, HodgeError> {
    if !check_mhs(w, f) {
        return Err(HodgeError::NotMixedHodgeStructure);
    }
    let ambient = f.space().dim();
    let fbar = f.conj();
    let weights = w.weights();
    let wmin = *weights.first().unwrap_or(&0);
    let e = f.end();
    let mut pieces = BTreeMap::new();
    for &k in &weights {
        let wk = w.get_complex(k);
        for p in (k - e + 1)..=(e - 1) {
            let q = k - p;
            let left = f.get(p).intersect(&wk)?;
            if left.is_zero() {
                continue;
            }
            let mut right = fbar.get(q).intersect(&wk)?;
            let mut j = 2;
            while k - j >= wmin - 1 {
                let term = fbar.get(q - j + 1).intersect(&w.get_complex(k - j))?;
                right = right.sum(&term)?;
                j += 1;
            }
            let piece = left.intersect(&right)?;
            if !piece.is_zero() {
                pieces.insert((p, q), piece);
            }
        }
    }
    Ok(DeligneSplitting { ambient, pieces })
}
