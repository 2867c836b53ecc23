use std::collections::BTreeMap;

use num_traits::Zero;

use super::{HodgeError, HodgeNumbers};
use crate::linalg::{is_positive_definite, GaussMatrix, GaussRational, GaussSubspace, Subspace};
use crate::symplectic::SymplecticSpace;

/// A decreasing filtration `F^p` of `H_ℂ = ℚ(i)^{2n}`.
///
/// Stored on the window `[start, start + steps.len())`: below it `F^p = H`,
/// above it `F^p = 0`. The window is trimmed so that its first step is a
/// proper subspace and its last step is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Filtration {
    space: SymplecticSpace,
    start: i32,
    steps: Vec<GaussSubspace>,
}

impl Filtration {
    /// Builds a filtration from consecutive `(p, F^p)` pairs in increasing `p`.
    pub fn new(space: SymplecticSpace, pairs: Vec<(i32, GaussSubspace)>) -> Result<Self, HodgeError> {
        let Some(&(start, _)) = pairs.first() else {
            return Err(HodgeError::EmptyFiltration);
        };
        for (k, (p, v)) in pairs.iter().enumerate() {
            if *p != start + k as i32 {
                return Err(HodgeError::NotContiguous);
            }
            if v.ambient_dim() != space.dim() {
                return Err(HodgeError::AmbientMismatch);
            }
        }
        for w in pairs.windows(2) {
            if !w[0].1.contains(&w[1].1) {
                return Err(HodgeError::NotNested(w[0].0));
            }
        }
        let steps = pairs.into_iter().map(|(_, v)| v).collect();
        Ok(Self::normalized(space, start, steps))
    }

    fn normalized(space: SymplecticSpace, mut start: i32, mut steps: Vec<GaussSubspace>) -> Self {
        let lead = steps.iter().take_while(|s| s.is_full()).count();
        steps.drain(..lead);
        start += lead as i32;
        while steps.last().is_some_and(|s| s.is_zero()) {
            steps.pop();
        }
        Filtration { space, start, steps }
    }

    /// Builds `F^p = Σ_{r ≥ p} V_r` from a graded decomposition.
    pub fn from_grading(
        space: SymplecticSpace,
        pieces: &BTreeMap<i32, GaussSubspace>,
    ) -> Result<Self, HodgeError> {
        let d = space.dim();
        let (Some(&lo), Some(&hi)) = (pieces.keys().next(), pieces.keys().next_back()) else {
            return Self::new(space, vec![(0, Subspace::zero(d))]);
        };
        let mut pairs = Vec::new();
        let mut acc = Subspace::zero(d);
        for p in (lo..=hi + 1).rev() {
            if let Some(v) = pieces.get(&p) {
                acc = acc.sum(v)?;
            }
            pairs.push((p, acc.clone()));
        }
        pairs.reverse();
        Self::new(space, pairs)
    }

    pub fn space(&self) -> SymplecticSpace {
        self.space
    }

    /// `F^p`.
    pub fn get(&self, p: i32) -> GaussSubspace {
        let d = self.space.dim();
        if p < self.start {
            return Subspace::full(d);
        }
        match self.steps.get((p - self.start) as usize) {
            Some(s) => s.clone(),
            None => Subspace::zero(d),
        }
    }

    /// Indices `p` where `F^p` may differ from `F^{p+1}`: `F^p = H` below this
    /// range and `F^{p+1} = 0` above it.
    pub fn jump_range(&self) -> (i32, i32) {
        (self.start - 1, self.start + self.steps.len() as i32 - 1)
    }

    /// First index with `F^p ≠ H`.
    pub fn start(&self) -> i32 {
        self.start
    }

    /// First index with `F^p = 0`.
    pub fn end(&self) -> i32 {
        self.start + self.steps.len() as i32
    }

    /// The stored `(p, F^p)` pairs followed by the terminating zero step.
    pub fn pairs(&self) -> Vec<(i32, GaussSubspace)> {
        let mut out: Vec<(i32, GaussSubspace)> = self
            .steps
            .iter()
            .enumerate()
            .map(|(k, s)| (self.start + k as i32, s.clone()))
            .collect();
        out.push((self.end(), Subspace::zero(self.space.dim())));
        out
    }

    /// `h^p = dim F^p − dim F^{p+1}`, nonzero entries only.
    pub fn hodge_dims(&self) -> BTreeMap<i32, usize> {
        let (lo, hi) = self.jump_range();
        (lo..=hi)
            .map(|p| (p, self.get(p).dim() - self.get(p + 1).dim()))
            .filter(|(_, v)| *v > 0)
            .collect()
    }

    /// `conj(F)^p = conj(F^p)`.
    pub fn conj(&self) -> Self {
        Filtration {
            space: self.space,
            start: self.start,
            steps: self.steps.iter().map(|s| s.conj()).collect(),
        }
    }

    /// `gF` for an invertible `g`.
    pub fn transform(&self, g: &GaussMatrix) -> Result<Self, HodgeError> {
        let steps = self
            .steps
            .iter()
            .map(|s| s.image_under(g))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::normalized(self.space, self.start, steps))
    }

    /// `F^p := F^{p−k}`.
    pub fn shift(&self, k: i32) -> Self {
        Filtration {
            space: self.space,
            start: self.start + k,
            steps: self.steps.clone(),
        }
    }

    /// `N F^p ⊆ F^{p−1}` for all `p`.
    pub fn is_horizontal(&self, n: &GaussMatrix) -> Result<bool, HodgeError> {
        let (lo, hi) = self.jump_range();
        for p in lo..=hi + 1 {
            let img = self.get(p).image_under(n)?;
            if !self.get(p - 1).contains(&img) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn check_dims(&self, hn: &HodgeNumbers) -> Result<(), HodgeError> {
        hn.check_rank(self.space.n())?;
        let (lo, hi) = self.jump_range();
        let (hlo, hhi) = hn.range().unwrap_or((0, 0));
        for p in lo.min(hlo)..=hi.max(hhi) + 1 {
            let found = self.get(p).dim();
            let expected = hn.f_dim(p);
            if found != expected {
                return Err(HodgeError::DimensionMismatch { p, expected, found });
            }
        }
        Ok(())
    }
}

/// The three conditions defining `D`, evaluated separately.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DMembership {
    /// `H = F^p ⊕ conj(F^{−p})` for all `p`.
    pub opposed: bool,
    /// `Q(F^p, F^{−p}) = 0` for all `p`.
    pub isotropic: bool,
    /// `i^{p−q} Q(v, v̄)` positive definite on every `H^{p,q}`.
    pub positive: bool,
}

impl DMembership {
    pub fn holds(&self) -> bool {
        self.opposed && self.isotropic && self.positive
    }
}

/// Evaluates the defining conditions of `D` for `F` with Hodge numbers `hn`.
pub fn d_membership(f: &Filtration, hn: &HodgeNumbers) -> Result<DMembership, HodgeError> {
    f.check_dims(hn)?;
    let sp = f.space;
    let (lo, hi) = f.jump_range();
    let range = lo.min(-hi - 1)..=hi.max(-lo + 1);
    let mut opposed = true;
    let mut isotropic = true;
    for p in range {
        let a = f.get(p);
        let b = f.get(-p);
        if !a.intersect(&b.conj())?.is_zero() {
            opposed = false;
        }
        if !sp.q_vanishes(&a, &b) {
            isotropic = false;
        }
    }
    let positive = opposed && positive_on_pieces(f)?;
    Ok(DMembership {
        opposed,
        isotropic,
        positive,
    })
}

fn positive_on_pieces(f: &Filtration) -> Result<bool, HodgeError> {
    let (lo, hi) = f.jump_range();
    for p in lo..=hi {
        let q = -1 - p;
        let piece = f.get(p).intersect(&f.get(q).conj())?;
        if piece.is_zero() {
            continue;
        }
        let g = hermitian_gram(f.space, piece.basis(), p - q);
        if !is_positive_definite(&g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Gram matrix `M_ij = i^k Q(b_i, conj(b_j))`.
pub(crate) fn hermitian_gram(
    sp: SymplecticSpace,
    basis: &[Vec<GaussRational>],
    k: i32,
) -> GaussMatrix {
    hermitian_gram_twisted(sp, basis, k, None)
}

/// Gram matrix `M_ij = i^k Q(b_i, N conj(b_j))`.
pub(crate) fn hermitian_gram_twisted(
    sp: SymplecticSpace,
    basis: &[Vec<GaussRational>],
    k: i32,
    twist: Option<&GaussMatrix>,
) -> GaussMatrix {
    let unit = GaussRational::i_pow(k as i64);
    let r = basis.len();
    let conjs: Vec<Vec<GaussRational>> = basis
        .iter()
        .map(|b| {
            let c = crate::linalg::vec_conj(b);
            match twist {
                Some(n) => n.mul_vec(&c).expect("square"),
                None => c,
            }
        })
        .collect();
    let mut g = GaussMatrix::zeros(r, r);
    for i in 0..r {
        for j in 0..r {
            let v = sp.q(&basis[i], &conjs[j]);
            g[(i, j)] = if v.is_zero() { v } else { unit.clone() * &v };
        }
    }
    g
}

/// Membership in `D`.
pub fn is_in_d(f: &Filtration, hn: &HodgeNumbers) -> Result<bool, HodgeError> {
    Ok(d_membership(f, hn)?.holds())
}

/// Membership in the compact dual `Ď`: correct dimensions and isotropy.
pub fn is_in_compact_dual(f: &Filtration, hn: &HodgeNumbers) -> Result<bool, HodgeError> {
    Ok(d_membership(f, hn)?.isotropic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{gauss, GaussRational};

    fn gvec(v: &[(i64, i64)]) -> Vec<GaussRational> {
        v.iter().map(|&(a, b)| gauss(a, b)).collect()
    }

    fn line(sp: SymplecticSpace, v: &[(i64, i64)]) -> GaussSubspace {
        Subspace::span(sp.dim(), &[gvec(v)]).unwrap()
    }

    #[test]
    fn upper_half_plane_point() {
        let sp = SymplecticSpace::new(1);
        let hn = HodgeNumbers::siegel(1);
        let f = Filtration::new(sp, vec![(0, line(sp, &[(1, 0), (0, 1)]))]).unwrap();
        assert!(is_in_d(&f, &hn).unwrap());
        let bad = Filtration::new(sp, vec![(0, line(sp, &[(1, 0), (0, -1)]))]).unwrap();
        assert!(!is_in_d(&bad, &hn).unwrap());
        let real = Filtration::new(sp, vec![(0, line(sp, &[(1, 0), (0, 0)]))]).unwrap();
        let m = d_membership(&real, &hn).unwrap();
        assert!(m.isotropic && !m.opposed && !m.positive);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let sp = SymplecticSpace::new(1);
        let f = Filtration::new(sp, vec![(0, line(sp, &[(1, 0), (0, 1)]))]).unwrap();
        assert!(matches!(
            is_in_d(&f, &HodgeNumbers::from_pairs(&[(1, 1), (-2, 1)]).unwrap()),
            Err(HodgeError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn normalization_trims_trivial_steps() {
        let sp = SymplecticSpace::new(1);
        let l = line(sp, &[(1, 0), (0, 1)]);
        let f = Filtration::new(
            sp,
            vec![
                (-3, Subspace::full(2)),
                (-2, Subspace::full(2)),
                (-1, l.clone()),
                (0, l.clone()),
                (1, Subspace::zero(2)),
            ],
        )
        .unwrap();
        assert_eq!(f.start(), -1);
        assert_eq!(f.end(), 1);
        assert_eq!(f.get(-7), Subspace::full(2));
        assert_eq!(f.get(0), l);
        assert_eq!(f.hodge_dims(), [(-2, 1), (0, 1)].into_iter().collect());
        assert_eq!(f.shift(1).get(1), l);
        assert!(Filtration::new(sp, vec![(0, l.clone()), (1, Subspace::full(2))]).is_err());
        assert!(Filtration::new(sp, vec![(0, l.clone()), (2, l)]).is_err());
    }

    #[test]
    fn weil_type_flags() {
        let sp = SymplecticSpace::new(2);
        let hn = HodgeNumbers::weil_1111();
        let flag = |top: Vec<GaussRational>| {
            let b = gvec(&[(0, 0), (1, 0), (0, 0), (0, 1)]);
            let e2 = gvec(&[(0, 0), (1, 0), (0, 0), (0, 0)]);
            let e4 = gvec(&[(0, 0), (0, 0), (0, 0), (1, 0)]);
            Filtration::new(
                sp,
                vec![
                    (-1, Subspace::span(4, &[top.clone(), e2, e4]).unwrap()),
                    (0, Subspace::span(4, &[top.clone(), b]).unwrap()),
                    (1, Subspace::span(4, &[top]).unwrap()),
                ],
            )
            .unwrap()
        };
        // F^1 = ⟨e1 + i e3⟩: i^3 Q(v, v̄) = −2 on H^{1,−2}.
        let m = d_membership(&flag(gvec(&[(1, 0), (0, 0), (0, 1), (0, 0)])), &hn).unwrap();
        assert!(m.opposed && m.isotropic && !m.positive);
        // F^1 = ⟨e1 − i e3⟩ gives a point of D.
        assert!(is_in_d(&flag(gvec(&[(1, 0), (0, 0), (0, -1), (0, 0)])), &hn).unwrap());
    }
}
