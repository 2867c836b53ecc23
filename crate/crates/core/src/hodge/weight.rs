use super::{Filtration, HodgeError};
use crate::linalg::{GaussSubspace, RatSubspace, Subspace};
use crate::symplectic::{Nilpotent, SymplecticSpace};

/// An increasing filtration `W_k` of `H = ℚ^{2n}`.
///
/// `W_k = 0` for `k < lo`, `W_k = steps[k − lo]` on the stored window, and
/// `W_k = H` above it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightFiltration {
    space: SymplecticSpace,
    lo: i32,
    steps: Vec<RatSubspace>,
}

impl WeightFiltration {
    /// The trivial filtration of a pure weight −1 structure.
    pub fn pure(space: SymplecticSpace) -> Self {
        WeightFiltration {
            space,
            lo: -1,
            steps: Vec::new(),
        }
    }

    pub fn space(&self) -> SymplecticSpace {
        self.space
    }

    /// `W_k`.
    pub fn get(&self, k: i32) -> RatSubspace {
        let d = self.space.dim();
        if k < self.lo {
            return Subspace::zero(d);
        }
        match self.steps.get((k - self.lo) as usize) {
            Some(s) => s.clone(),
            None => Subspace::full(d),
        }
    }

    pub fn get_complex(&self, k: i32) -> GaussSubspace {
        self.get(k).to_gauss()
    }

    /// Weights `k` with `gr^W_k ≠ 0`, increasing.
    pub fn weights(&self) -> Vec<i32> {
        let hi = self.lo + self.steps.len() as i32;
        (self.lo..=hi)
            .filter(|&k| self.get(k).dim() > self.get(k - 1).dim())
            .collect()
    }

    /// `dim gr^W_k`.
    pub fn graded_dim(&self, k: i32) -> usize {
        self.get(k).dim() - self.get(k - 1).dim()
    }

    pub fn is_pure(&self) -> bool {
        self.weights() == vec![-1]
    }
}

/// `W(N)` for `N ≠ 0` with `N² = 0`: `0 ⊂ Im N ⊂ Ker N ⊂ H` in weights
/// `−2, −1, 0`.
pub fn weight_filtration(n: &Nilpotent) -> Result<WeightFiltration, HodgeError> {
    if n.is_zero() {
        return Err(HodgeError::ZeroNilpotent);
    }
    match n.nilpotency_index() {
        2 => {}
        3 => return Err(HodgeError::NotSquareZero),
        _ => return Err(HodgeError::TypeThree),
    }
    Ok(WeightFiltration {
        space: n.space(),
        lo: -2,
        steps: vec![n.image(), n.kernel()],
    })
}

/// Whether `F` induces a pure Hodge structure of weight `k` on every `gr^W_k`.
pub fn check_mhs(w: &WeightFiltration, f: &Filtration) -> bool {
    if w.space() != f.space() {
        return false;
    }
    check_mhs_inner(w, f).unwrap_or(false)
}

fn check_mhs_inner(w: &WeightFiltration, f: &Filtration) -> Result<bool, HodgeError> {
    let (s, e) = (f.start(), f.end());
    for k in w.weights() {
        let wk = w.get_complex(k);
        let wk1 = w.get_complex(k - 1);
        let lo = (s - 1).min(k + 1 - e);
        let hi = e.max(k + 2 - s);
        for p in lo..=hi {
            let a = f.get(p).intersect(&wk)?.sum(&wk1)?;
            let b = f.get(k - p + 1).conj().intersect(&wk)?.sum(&wk1)?;
            if a.sum(&b)? != wk || a.intersect(&b)? != wk1 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
