use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use super::{fiber_point, BoundaryPoint, Filtration, HodgeError, HodgeNumbers};
use crate::fans::Cone;
use crate::linalg::{
    is_positive_definite, rat, to_gauss_vec, vec_add, vec_scale, GaussMatrix,
    GaussRational, GaussSubspace, RatMatrix, Rational, Subspace,
};
use crate::symplectic::{sym_to_eta, IsotropicSubspace, SymplecticSpace};

/// Data for a nilpotent orbit built from an ℝ-split limiting mixed Hodge
/// structure on a single ray.
///
/// `S` is the span of the last `m` basis vectors, `m = Σ_p weight_zero[p]`.
/// The nilpotent is `N_X` with `X = Aᵀ D A`, where `D` is `(−1)^p` on the
/// coordinates assigned to `I^{p,−p}`. The weight −1 part is the fiber point
/// over the Siegel point `Z'` of the complementary symplectic block. The
/// resulting filtration is moved by `γ · exp(z N)` with `Im z ≥ 0`, and the
/// ray by `Ad(γ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitOrbitSpec {
    pub n: usize,
    pub hodge: HodgeNumbers,
    /// `dim I^{p,−p}`, symmetric in `p`.
    pub weight_zero: BTreeMap<i32, usize>,
    /// Invertible `m × m`.
    pub a: RatMatrix,
    /// Symmetric `(n−m) × (n−m)` with positive definite imaginary part.
    pub z_prime: GaussMatrix,
    pub z: GaussRational,
    /// Symplectic `2n × 2n`.
    pub gamma: RatMatrix,
}

fn invalid(msg: &str) -> HodgeError {
    HodgeError::InvalidSpec(msg.to_string())
}

impl SplitOrbitSpec {
    /// Spec with `A = I`, `Z' = i I`, `z = 0`, `γ = I`.
    pub fn standard(n: usize, hodge: HodgeNumbers, weight_zero: BTreeMap<i32, usize>) -> Self {
        let m: usize = weight_zero.values().sum();
        let k = n.saturating_sub(m);
        SplitOrbitSpec {
            n,
            hodge,
            weight_zero,
            a: RatMatrix::identity(m),
            z_prime: GaussMatrix::identity(k).scale(&GaussRational::i()),
            z: GaussRational::zero(),
            gamma: RatMatrix::identity(2 * n),
        }
    }

    pub fn m(&self) -> usize {
        self.weight_zero.values().sum()
    }

    /// `h'^{p,−p−1} = h^{p,−p−1} − i^{p,−p} − i^{p+1,−p−1}`.
    pub fn graded_hodge_numbers(&self) -> Result<HodgeNumbers, HodgeError> {
        let i = |p: i32| self.weight_zero.get(&p).copied().unwrap_or(0);
        let mut out = BTreeMap::new();
        let (lo, hi) = self.hodge.range().unwrap_or((0, -1));
        for p in lo..=hi {
            let used = i(p) + i(p + 1);
            let h = self.hodge.get(p);
            if used > h {
                return Err(invalid("weight-zero pieces exceed the Hodge numbers"));
            }
            out.insert(p, h - used);
        }
        for &p in self.weight_zero.keys() {
            if (p < lo || p > hi + 1) && i(p) > 0 {
                return Err(invalid("weight-zero piece outside the Hodge range"));
            }
        }
        HodgeNumbers::new(out)
    }

    fn validate(&self) -> Result<(usize, HodgeNumbers), HodgeError> {
        let n = self.n;
        self.hodge.check_rank(n)?;
        for (&p, &v) in &self.weight_zero {
            if self.weight_zero.get(&-p).copied().unwrap_or(0) != v {
                return Err(invalid("weight-zero multiplicities must be symmetric"));
            }
        }
        let m = self.m();
        if m > n {
            return Err(invalid("dim S exceeds n"));
        }
        if self.a.rows() != m || self.a.cols() != m || self.a.inverse().is_err() {
            return Err(invalid("A must be an invertible m x m matrix"));
        }
        let k = n - m;
        let zp = &self.z_prime;
        if zp.rows() != k || zp.cols() != k || zp.transpose() != *zp {
            return Err(invalid("Z' must be symmetric of size n - m"));
        }
        let im = zp.map(|x| GaussRational::real(x.im.clone()));
        if !is_positive_definite(&im)? {
            return Err(invalid("Im Z' must be positive definite"));
        }
        if self.z.im.is_negative() {
            return Err(invalid("Im z must be nonnegative"));
        }
        if !SymplecticSpace::new(n).is_symplectic(&self.gamma) {
            return Err(invalid("gamma must be symplectic"));
        }
        let hp = self.graded_hodge_numbers()?;
        Ok((m, hp))
    }

    /// Builds the boundary point.
    pub fn build(&self) -> Result<BoundaryPoint, HodgeError> {
        let (m, h_prime) = self.validate()?;
        let n = self.n;
        let k = n - m;
        let sp = SymplecticSpace::new(n);
        let d = sp.dim();

        // Coordinates of the weight-zero blocks, in increasing p.
        let mut block: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
        let mut signs: Vec<Rational> = Vec::with_capacity(m);
        for (&p, &c) in &self.weight_zero {
            let start = signs.len();
            block.insert(p, (start..start + c).collect());
            for _ in 0..c {
                signs.push(if p % 2 == 0 { rat(1) } else { rat(-1) });
            }
        }
        let dmat = {
            let mut x = RatMatrix::zeros(m, m);
            for (i, s) in signs.iter().enumerate() {
                x[(i, i)] = s.clone();
            }
            x
        };
        let x = self.a.transpose().mul(&dmat)?.mul(&self.a)?;
        let s = IsotropicSubspace::standard(sp, m);
        let nil = sym_to_eta(&s, &x)?;
        let ng = nil.matrix().to_gauss();

        // f_j = Σ_i (A^{-1})_{ij} e_{n−m+i}, so that Q(f_j, N f_l) = D_jl.
        let ainv = self.a.inverse()?;
        let f: Vec<Vec<GaussRational>> = (0..m)
            .map(|j| {
                let mut v = vec![Rational::zero(); d];
                for i in 0..m {
                    v[n - m + i] = ainv[(i, j)].clone();
                }
                to_gauss_vec(&v)
            })
            .collect();

        let mut grading: BTreeMap<i32, GaussSubspace> = BTreeMap::new();
        let mut add = |p: i32, v: &GaussSubspace| -> Result<(), HodgeError> {
            let cur = grading.remove(&p).unwrap_or_else(|| Subspace::zero(d));
            grading.insert(p, cur.sum(v)?);
            Ok(())
        };
        for (&p, idx) in &block {
            let vs: Vec<Vec<GaussRational>> = if p == 0 {
                idx.iter().map(|&j| f[j].clone()).collect()
            } else {
                let partner = &block[&-p];
                let sign = if p > 0 { GaussRational::i() } else { -GaussRational::i() };
                idx.iter()
                    .zip(partner)
                    .map(|(&a, &b)| {
                        let (a, b) = if p > 0 { (a, b) } else { (b, a) };
                        vec_add(&f[a], &vec_scale(&f[b], &sign))
                    })
                    .collect()
            };
            let top = Subspace::span(d, &vs)?;
            let bottom = top.image_under(&ng)?;
            add(p, &top)?;
            add(p - 1, &bottom)?;
        }

        // Weight −1: the Lagrangian colspan [I; Z'] of the complementary block.
        let lagrangian: Vec<Vec<GaussRational>> = (0..k)
            .map(|j| {
                let mut v = vec![GaussRational::zero(); d];
                v[j] = GaussRational::real(rat(1));
                for i in 0..k {
                    v[n + i] = self.z_prime[(i, j)].clone();
                }
                v
            })
            .collect();
        for (p, v) in fiber_point(sp, &lagrangian, &h_prime)? {
            add(p, &v)?;
        }
        let split = Filtration::from_grading(sp, &grading)?;

        let g = self.gamma.to_gauss();
        let shift = ng.scale(&self.z).exp_nilpotent()?;
        let moved = split.transform(&g.mul(&shift)?)?;
        let cone = if m == 0 {
            Cone::zero(sp)
        } else {
            Cone::ray(nil.conjugate(&self.gamma)?)
        };
        Ok(BoundaryPoint::from_parts(cone, moved, self.hodge.clone()))
    }
}
