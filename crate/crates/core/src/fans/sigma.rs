use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{Cone, ConeKey, Fan, FanError, SymCone};
use crate::linalg::{RatMatrix, Subspace};
use crate::symplectic::{sym_to_eta, IsotropicSubspace, Nilpotent, SymplecticSpace};

/// Generators of `GL(2, ℤ)`: `T`, `T⁻¹`, `S`, `R`.
pub fn gl2_generators() -> Vec<RatMatrix> {
    vec![
        RatMatrix::from_i64(2, 2, &[1, 1, 0, 1]),
        RatMatrix::from_i64(2, 2, &[1, -1, 0, 1]),
        RatMatrix::from_i64(2, 2, &[0, -1, 1, 0]),
        RatMatrix::from_i64(2, 2, &[1, 0, 0, -1]),
    ]
}

/// Distinct products of at most `bound` generators, identity first.
pub fn gl2_words(bound: usize) -> Vec<RatMatrix> {
    let gens = gl2_generators();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    let id = RatMatrix::identity(2);
    seen.insert(id.entries().to_vec());
    out.push(id.clone());
    queue.push_back((id, 0));
    while let Some((g, len)) = queue.pop_front() {
        if len == bound {
            continue;
        }
        for t in &gens {
            let h = g.mul(t).expect("2x2");
            if seen.insert(h.entries().to_vec()) {
                out.push(h.clone());
                queue.push_back((h, len + 1));
            }
        }
    }
    out
}

/// The element of `Γ(S) ⊂ Sp(n, ℚ)` acting on `η(S)` as `X ↦ g X gᵀ`.
pub fn embed_gl(s: &IsotropicSubspace, g: &RatMatrix) -> Result<RatMatrix, FanError> {
    let sp = s.space();
    let (n, m) = (sp.n(), s.dim());
    let ginv_t = g.inverse().map_err(|_| FanError::NotUnimodular)?.transpose();
    let a = RatMatrix::identity(n - m).direct_sum(&ginv_t);
    let std = sp.levi(&a)?;
    let p = s.adapted_basis()?;
    let pinv = sp.symplectic_inverse(&p);
    Ok(p.mul(&std).and_then(|x| x.mul(&pinv)).expect("square"))
}

/// Pushes a `Sym(m)` cone into `η(S)`.
pub fn sym_cone_to_eta(s: &IsotropicSubspace, c: &SymCone) -> Result<Cone, FanError> {
    if c.m != s.dim() {
        return Err(FanError::RankMismatch {
            expected: s.dim(),
            found: c.m,
        });
    }
    let gens = c
        .generators
        .iter()
        .map(|x| sym_to_eta(s, x))
        .collect::<Result<Vec<_>, _>>()?;
    Cone::new(s.space(), gens)
}

/// A truncation of `Σ(S)`: for `m = 1` the ray of `η⁺(S)` and its vertex,
/// for `m = 2` the faces of `g σ₀ gᵀ` over words of length `≤ word_bound`.
pub fn build_sigma_s(s: &IsotropicSubspace, word_bound: usize) -> Result<Fan, FanError> {
    let sp = s.space();
    match s.dim() {
        1 => {
            let x = RatMatrix::identity(1);
            let ray = Cone::ray(sym_to_eta(s, &x)?);
            let flip = embed_gl(s, &RatMatrix::from_i64(1, 1, &[-1]))?;
            Fan::new(sp, vec![Cone::zero(sp), ray], vec![flip])
        }
        2 => {
            let base = SymCone::sigma0();
            let mut keys: BTreeMap<ConeKey, ()> = BTreeMap::new();
            let mut cones = Vec::new();
            for g in gl2_words(word_bound) {
                let cell = sym_cone_to_eta(s, &base.act(&g))?;
                for f in cell.faces() {
                    let f = f.canonical();
                    if keys.insert(f.key(), ()).is_none() {
                        cones.push(f);
                    }
                }
            }
            cones.sort_by_key(|c| c.dim());
            let gens = gl2_generators()
                .iter()
                .map(|g| embed_gl(s, g))
                .collect::<Result<Vec<_>, _>>()?;
            Fan::new(sp, cones, gens)
        }
        m => Err(FanError::UnsupportedRank(m)),
    }
}

/// The cones of `Σ` whose nilpotents all live in one `η(S)` with
/// `dim S ≤ h01`. Fails if some cone lies in no `η(S)`.
pub fn filter_sigma_ev(fan: &Fan, h01: usize) -> Result<Fan, FanError> {
    let sp = fan.space();
    let d = sp.dim();
    let mut kept = Vec::new();
    for (i, c) in fan.cones().iter().enumerate() {
        let mut s = Subspace::zero(d);
        for g in c.generators() {
            s = s.sum(&g.image()).expect("same ambient");
        }
        if !sp.q_vanishes(&s, &s) {
            return Err(FanError::NotInEta(i));
        }
        if s.dim() <= h01 {
            kept.push(c.clone());
        }
    }
    Fan::new(sp, kept, fan.group_gens().to_vec())
}

/// Outcome of [`check_gamma_compatibility`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Compatibility {
    /// Every image of a listed cone is listed.
    Compatible,
    /// No conflict found, but some images leave the listed region.
    Inconclusive { escaped: Vec<usize> },
    /// `Ad(γ)` of cone `cone` meets the listed region without being listed.
    Incompatible { cone: usize },
}

impl Compatibility {
    /// True unless a conflict was found.
    pub fn holds_on_covered(&self) -> bool {
        !matches!(self, Compatibility::Incompatible { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Compatibility::Compatible => "compatible",
            Compatibility::Inconclusive { .. } => "inconclusive",
            Compatibility::Incompatible { .. } => "incompatible",
        }
    }
}

/// Tests `Ad(γ)σ ∈ Σ` for every listed `σ`. An image that is not listed but
/// whose relative interior lies in a listed cone is a conflict; one outside
/// every listed cone is reported as escaping the truncation.
pub fn check_gamma_compatibility(fan: &Fan, gamma: &RatMatrix) -> Result<Compatibility, FanError> {
    let sp = fan.space();
    sp.check_integral_symplectic(gamma)?;
    let keys = fan.key_index();
    let mut escaped = Vec::new();
    for (i, c) in fan.cones().iter().enumerate() {
        let image = c.conjugate(gamma)?;
        if keys.contains_key(&image.key()) {
            continue;
        }
        let p = Nilpotent::new(sp, image.generator_sum())?;
        if fan.cones().iter().any(|x| x.contains(&p)) {
            return Ok(Compatibility::Incompatible { cone: i });
        }
        escaped.push(i);
    }
    Ok(if escaped.is_empty() {
        Compatibility::Compatible
    } else {
        Compatibility::Inconclusive { escaped }
    })
}

/// `σ₀` inside `η(S)` for the standard `S` of dimension two in `ℚ^{2n}`.
pub fn standard_sigma0(n: usize) -> Result<Cone, FanError> {
    let s = IsotropicSubspace::standard(SymplecticSpace::new(n), 2);
    sym_cone_to_eta(&s, &SymCone::sigma0())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fans::{reduce_binary_form, validate_fan, FanViolation};
    use crate::symplectic::eta_to_sym;

    fn std_s(n: usize, m: usize) -> IsotropicSubspace {
        IsotropicSubspace::standard(SymplecticSpace::new(n), m)
    }

    #[test]
    fn rank_one() {
        let s = std_s(2, 1);
        let fan = build_sigma_s(&s, 5).unwrap();
        assert_eq!(fan.len(), 2);
        assert!(validate_fan(&fan).is_valid());
        let g = &fan.group_gens()[0];
        assert_eq!(check_gamma_compatibility(&fan, g).unwrap(), Compatibility::Compatible);
    }

    #[test]
    fn rank_two_is_a_fan() {
        let s = std_s(2, 2);
        let fan = build_sigma_s(&s, 2).unwrap();
        assert!(fan.len() > 8);
        let v = validate_fan(&fan);
        assert!(v.is_valid(), "{:?}", v.violation);
        assert!(check_gamma_compatibility(&fan, &fan.group_gens()[0])
            .unwrap()
            .holds_on_covered());
    }

    #[test]
    fn group_action_matches_sym() {
        let s = std_s(3, 2);
        let g = RatMatrix::from_i64(2, 2, &[2, 1, 1, 1]);
        let gamma = embed_gl(&s, &g).unwrap();
        let x = RatMatrix::from_i64(2, 2, &[3, 1, 1, 2]);
        let n = sym_to_eta(&s, &x).unwrap().conjugate(&gamma).unwrap();
        let want = g.mul(&x).unwrap().mul(&g.transpose()).unwrap();
        assert_eq!(eta_to_sym(&s, &n).unwrap(), Some(want));
    }

    #[test]
    fn overlapping_copy_is_not_a_fan() {
        let s = std_s(2, 2);
        let base = SymCone::sigma0();
        let a = sym_cone_to_eta(&s, &base).unwrap();
        let b = sym_cone_to_eta(&s, &base.act(&RatMatrix::from_i64(2, 2, &[1, 0, 1, 2]))).unwrap();
        let mut cones = a.faces();
        for f in b.faces() {
            if !cones.iter().any(|c| c.same_as(&f)) {
                cones.push(f);
            }
        }
        let fan = Fan::new(s.space(), cones, vec![]).unwrap();
        match validate_fan(&fan).violation {
            Some(FanViolation::BadIntersection { first, second }) => {
                let pair = [fan.cones()[first].dim(), fan.cones()[second].dim()];
                assert_eq!(pair, [3, 3]);
            }
            other => panic!("expected bad intersection, got {other:?}"),
        }
        let missing = Fan::new(s.space(), vec![a], vec![]).unwrap();
        assert!(matches!(
            validate_fan(&missing).violation,
            Some(FanViolation::MissingFace { .. })
        ));
        assert!(validate_fan(&Fan::empty(s.space())).is_valid());
    }

    #[test]
    fn truncation_compatibility() {
        let s = std_s(2, 2);
        let sigma0 = sym_cone_to_eta(&s, &SymCone::sigma0()).unwrap();
        let fan = Fan::from_faces(&sigma0);
        let t = embed_gl(&s, &gl2_generators()[0]).unwrap();
        let verdict = check_gamma_compatibility(&fan, &t).unwrap();
        assert!(matches!(verdict, Compatibility::Inconclusive { .. }), "{verdict:?}");
        assert!(check_gamma_compatibility(&fan, &RatMatrix::from_i64(1, 1, &[2])).is_err());
    }

    #[test]
    fn reduced_forms_land_in_listed_cells() {
        let s = std_s(2, 2);
        let fan = build_sigma_s(&s, 3).unwrap();
        let x = RatMatrix::from_i64(2, 2, &[5, 3, 3, 2]);
        let r = reduce_binary_form(&x).unwrap();
        // γ X γᵀ ∈ σ₀, so X ∈ γ⁻¹ σ₀ γ^{-T}, a listed cell for short γ.
        let n = sym_to_eta(&s, &x).unwrap();
        assert!(r.steps <= 3);
        assert!(fan.cones().iter().any(|c| c.contains(&n)));
    }

    #[test]
    fn filter_by_rank() {
        let s = std_s(2, 2);
        let fan = build_sigma_s(&s, 1).unwrap();
        let only_rays = filter_sigma_ev(&fan, 1).unwrap();
        assert!(only_rays.cones().iter().all(|c| c.interior_point().unwrap().rank() <= 1));
        assert!(only_rays.cones().iter().any(|c| c.dim() == 1));
        assert!(!only_rays.cones().iter().any(|c| c.dim() >= 2));
        assert_eq!(filter_sigma_ev(&fan, 2).unwrap().len(), fan.len());
    }

    #[test]
    fn unsupported_rank() {
        assert_eq!(build_sigma_s(&std_s(3, 3), 1), Err(FanError::UnsupportedRank(3)));
    }
}
