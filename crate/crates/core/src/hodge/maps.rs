use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use super::orbit::{cone_weight_filtration, ConeType};
use super::{
    check_nilpotent_orbit, classify_cone, deligne_splitting, BoundaryPoint, Filtration,
    HodgeError, HodgeNumbers, WeightFiltration,
};
use crate::fans::Cone;
use crate::linalg::{
    dot, vec_conj, vec_scale, vec_sub, GaussMatrix, GaussRational, GaussSubspace, Matrix,
    Subspace,
};
use crate::symplectic::{image_subspace, SymplecticSpace};

/// `F̃`: `F̃^{−1} = H`, `F̃^0 = ⊕_{p even} I^{p,−p−1} ⊕ ⊕_p I^{p,−p}`, `F̃^1 = 0`.
pub fn tilde_map(w: &WeightFiltration, f: &Filtration) -> Result<Filtration, HodgeError> {
    if w.weights().iter().any(|k| !(-2..=0).contains(k)) {
        return Err(HodgeError::WeightsOutOfRange);
    }
    let split = deligne_splitting(w, f)?;
    let f0 = split.sum_where(|p, q| p + q == 0 || (p + q == -1 && p % 2 == 0));
    let d = f.space().dim();
    Filtration::new(
        f.space(),
        vec![(-1, Subspace::full(d)), (0, f0), (1, Subspace::zero(d))],
    )
}

/// The odd variant: `conj(F̃)`.
pub fn tilde_map_odd(w: &WeightFiltration, f: &Filtration) -> Result<Filtration, HodgeError> {
    Ok(tilde_map(w, f)?.conj())
}

/// Orthogonalizes `vectors` for the Hermitian form `h(v, w) = i Q(v, w̄)`,
/// which must be positive definite on their span.
pub fn hermitian_gram_schmidt(
    sp: SymplecticSpace,
    vectors: &[Vec<GaussRational>],
) -> Result<Vec<Vec<GaussRational>>, HodgeError> {
    let h = |v: &[GaussRational], w: &[GaussRational]| GaussRational::i() * &sp.q(v, &vec_conj(w));
    let mut out: Vec<(Vec<GaussRational>, GaussRational)> = Vec::new();
    for v in vectors {
        let mut x = v.clone();
        for (b, hb) in &out {
            let c = h(&x, b) / hb;
            if !c.is_zero() {
                x = vec_sub(&x, &vec_scale(b, &c));
            }
        }
        let hx = h(&x, &x);
        if !hx.is_real() || !hx.re.is_positive() {
            return Err(HodgeError::IndefiniteForm);
        }
        out.push((x, hx));
    }
    Ok(out.into_iter().map(|(b, _)| b).collect())
}

/// A point of the level-restricted domain over a Lagrangian `L` on which
/// `i Q(v, w̄)` is positive definite: an orthogonal basis of `L` is dealt out
/// to the even `p` in decreasing order with multiplicities `h'^{p,−p−1}`, and
/// each odd piece is the conjugate of its partner. Returns the pieces
/// `H^{p,−p−1}` keyed by `p`.
pub fn fiber_point(
    sp: SymplecticSpace,
    lagrangian: &[Vec<GaussRational>],
    h_prime: &HodgeNumbers,
) -> Result<BTreeMap<i32, GaussSubspace>, HodgeError> {
    if h_prime.total() != 2 * lagrangian.len() {
        return Err(HodgeError::HodgeRank {
            expected: 2 * lagrangian.len(),
            found: h_prime.total(),
        });
    }
    let basis = hermitian_gram_schmidt(sp, lagrangian)?;
    let d = sp.dim();
    let mut pieces = BTreeMap::new();
    let mut rest = basis.into_iter();
    for (&p, &k) in h_prime.entries().iter().rev() {
        if p % 2 != 0 {
            continue;
        }
        let vs: Vec<Vec<GaussRational>> = rest.by_ref().take(k).collect();
        let v = Subspace::span(d, &vs)?;
        pieces.insert(-1 - p, v.conj());
        pieces.insert(p, v);
    }
    Ok(pieces)
}

/// Lifts a Siegel-side nilpotent orbit `(σ, exp(σ_ℂ)F_tor)` to a boundary
/// point of `D` with Hodge numbers `hn`.
///
/// With `m = dim Im N`, the lift exists only when `m ≤ h^{0,−1}`. The fiber
/// point `F'` over `I^{0,−1}` is chosen by [`fiber_point`]; the result is
/// `F'^p` for `p > 0`, `F'^0 ⊕ I^{0,0}` for `p = 0` and
/// `F'^p ⊕ I^{0,0} ⊕ I^{−1,−1}` for `p < 0`.
pub fn breve_lift(
    sigma: &Cone,
    f_tor: &Filtration,
    hn: &HodgeNumbers,
) -> Result<BoundaryPoint, HodgeError> {
    let sp = sigma.space();
    let w = cone_weight_filtration(sigma)?;
    let m = sigma.interior_point()?.rank();
    if m > hn.h01() {
        return Err(HodgeError::Obstruction { m, h01: hn.h01() });
    }
    hn.check_rank(sp.n())?;
    let siegel = HodgeNumbers::siegel(sp.n());
    let report = check_nilpotent_orbit(sigma, f_tor, &siegel)?;
    if !report.passes() {
        return Err(HodgeError::NotNilpotentOrbit(format!(
            "Siegel input fails {}",
            report.first_failure()
        )));
    }
    let split = deligne_splitting(&w, f_tor)?;
    let h_prime: BTreeMap<i32, usize> = hn
        .entries()
        .iter()
        .map(|(&p, &v)| (p, if p == 0 || p == -1 { v - m } else { v }))
        .collect();
    let h_prime = HodgeNumbers::new(h_prime)?;
    let mut grading = fiber_point(sp, split.get(0, -1).basis(), &h_prime)?;
    for (p, extra) in [(0, split.get(0, 0)), (-1, split.get(-1, -1))] {
        let cur = grading
            .remove(&p)
            .unwrap_or_else(|| Subspace::zero(sp.dim()));
        grading.insert(p, cur.sum(&extra)?);
    }
    let lifted = Filtration::from_grading(sp, &grading)?;
    let point = BoundaryPoint::from_parts(sigma.clone(), lifted, hn.clone());
    let check = check_nilpotent_orbit(sigma, &point.filtration, hn)?;
    if !check.passes() {
        return Err(HodgeError::NotNilpotentOrbit(format!(
            "lift fails {}",
            check.first_failure()
        )));
    }
    Ok(point)
}

/// Finds `z ∈ ℚ(i)^ℓ` with `exp(Σ z_j N_j) F1 = F2`, assuming the generators
/// multiply to zero pairwise.
pub fn same_orbit(
    sigma: &Cone,
    f1: &Filtration,
    f2: &Filtration,
) -> Result<Option<Vec<GaussRational>>, HodgeError> {
    let gens: Vec<GaussMatrix> = sigma.generators().iter().map(|g| g.matrix().to_gauss()).collect();
    for a in &gens {
        for b in &gens {
            if !a.mul(b)?.is_zero() {
                return Err(HodgeError::NotSquareZero);
            }
        }
    }
    if f1.hodge_dims() != f2.hodge_dims() || f1.start() != f2.start() {
        return Ok(None);
    }
    let l = gens.len();
    let mut rows: Vec<Vec<GaussRational>> = Vec::new();
    let mut rhs: Vec<GaussRational> = Vec::new();
    for p in f1.start()..f1.end() {
        let ann = f2.get(p).annihilator();
        for v in f1.get(p).basis() {
            let images: Vec<Vec<GaussRational>> = gens
                .iter()
                .map(|g| g.mul_vec(v))
                .collect::<Result<_, _>>()?;
            for a in ann.basis() {
                rows.push(images.iter().map(|nv| dot(a, nv)).collect());
                rhs.push(-dot(a, v));
            }
        }
    }
    let z = if l == 0 {
        Vec::new()
    } else if rows.is_empty() {
        vec![GaussRational::zero(); l]
    } else {
        match Matrix::from_rows(l, &rows)?.solve(&rhs)? {
            Some(z) => z,
            None => return Ok(None),
        }
    };
    let d = sigma.space().dim();
    let mut m = GaussMatrix::zeros(d, d);
    for (g, c) in gens.iter().zip(&z) {
        m = m.add(&g.scale(c))?;
    }
    let moved = f1.transform(&m.exp_nilpotent()?)?;
    Ok((moved == *f2).then_some(z))
}

/// The filtration induced on `gr^W_{−1} = W_{−1}/W_{−2}`, written in the
/// symplectic coordinates of an adapted basis for `S = Im N`.
pub fn graded_piece(pt: &BoundaryPoint) -> Result<Filtration, HodgeError> {
    let sigma = &pt.cone;
    if classify_cone(sigma, &[])? == ConeType::Neither {
        return Err(HodgeError::NeitherType);
    }
    let n = sigma.interior_point()?;
    if n.is_zero() {
        return Ok(pt.filtration.clone());
    }
    let sp = sigma.space();
    let s = image_subspace(&n)?;
    let m = s.dim();
    let k = sp.n() - m;
    let p = s.adapted_basis()?;
    let pinv = sp.symplectic_inverse(&p).to_gauss();
    let w1 = n.kernel().to_gauss();
    let f = &pt.filtration;
    let sub = SymplecticSpace::new(k);
    let keep: Vec<usize> = (0..k).chain(sp.n()..sp.n() + k).collect();
    let mut pairs = Vec::new();
    for q in f.start()..=f.end() {
        let v = f.get(q).intersect(&w1)?;
        let coords: Vec<Vec<GaussRational>> = v
            .basis()
            .iter()
            .map(|x| {
                let y = pinv.mul_vec(x).expect("square");
                keep.iter().map(|&i| y[i].clone()).collect()
            })
            .collect();
        pairs.push((q, Subspace::span(2 * k, &coords)?));
    }
    Filtration::new(sub, pairs)
}

/// Hodge numbers of a filtration read as a weight −1 structure.
pub fn graded_hodge_numbers(f: &Filtration) -> Result<HodgeNumbers, HodgeError> {
    HodgeNumbers::new(f.hodge_dims())
}
