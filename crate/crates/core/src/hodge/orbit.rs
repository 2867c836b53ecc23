use std::fmt;

use super::filtration::hermitian_gram_twisted;
use super::{
    check_mhs, d_membership, deligne_splitting, is_in_d, weight_filtration, DeligneSplitting,
    Filtration, HodgeError, HodgeNumbers, WeightFiltration,
};
use crate::fans::Cone;
use crate::linalg::{is_positive_definite, rat, GaussMatrix, GaussRational};
use crate::symplectic::{image_subspace, in_eta_plus, Nilpotent};

/// Sample heights for the `exp(Σ i t_j N_j) F ∈ D` check.
pub const SAMPLE_HEIGHTS: [i64; 3] = [4, 16, 64];

/// Even/odd/neither classification of a cone with `N² = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConeType {
    Even,
    Odd,
    Neither,
}

impl fmt::Display for ConeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConeType::Even => "even",
            ConeType::Odd => "odd",
            ConeType::Neither => "neither",
        })
    }
}

/// Which weight-0 Hodge pieces vanish: `even` means `I^{p,−p} = 0` for all
/// odd `p`, `odd` means `I^{p,−p} = 0` for all even `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Parity {
    pub even: bool,
    pub odd: bool,
}

/// Reads the parity off a Deligne splitting.
pub fn splitting_parity(split: &DeligneSplitting) -> Parity {
    let weight_zero: Vec<i32> = split
        .pieces()
        .keys()
        .filter(|(p, q)| p + q == 0)
        .map(|(p, _)| *p)
        .collect();
    Parity {
        even: weight_zero.iter().all(|p| p % 2 == 0),
        odd: weight_zero.iter().all(|p| p % 2 != 0),
    }
}

/// A cone together with a representative filtration of its nilpotent orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryPoint {
    pub cone: Cone,
    pub filtration: Filtration,
    pub hodge_numbers: HodgeNumbers,
}

impl BoundaryPoint {
    /// Validates the orbit before wrapping it.
    pub fn new(cone: Cone, filtration: Filtration, hodge_numbers: HodgeNumbers) -> Result<Self, HodgeError> {
        let report = check_nilpotent_orbit(&cone, &filtration, &hodge_numbers)?;
        if !report.passes() {
            return Err(HodgeError::NotNilpotentOrbit(report.first_failure().to_string()));
        }
        Ok(BoundaryPoint {
            cone,
            filtration,
            hodge_numbers,
        })
    }

    pub fn from_parts(cone: Cone, filtration: Filtration, hodge_numbers: HodgeNumbers) -> Self {
        BoundaryPoint {
            cone,
            filtration,
            hodge_numbers,
        }
    }
}

/// Per-condition outcome of [`check_nilpotent_orbit`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrbitReport {
    /// `dim F^p` matches the Hodge numbers.
    pub dimensions: bool,
    /// `F ∈ Ď`.
    pub compact_dual: bool,
    /// `N_j F^p ⊆ F^{p−1}` for every generator.
    pub horizontal: bool,
    /// `(W(σ), F)` is a mixed Hodge structure.
    pub mixed_hodge: bool,
    /// The graded Hermitian forms are positive definite.
    pub polarized: bool,
    /// `exp(Σ i t_j N_j) F ∈ D` for all `t_j ∈ {4, 16, 64}`.
    pub sampled: bool,
}

impl OrbitReport {
    pub fn passes(&self) -> bool {
        self.dimensions
            && self.compact_dual
            && self.horizontal
            && self.mixed_hodge
            && self.polarized
            && self.sampled
    }

    /// Name of the first failing condition, or `"none"`.
    pub fn first_failure(&self) -> &'static str {
        let checks = [
            (self.dimensions, "dimensions"),
            (self.compact_dual, "compact dual"),
            (self.horizontal, "horizontality"),
            (self.mixed_hodge, "mixed Hodge structure"),
            (self.polarized, "polarization"),
            (self.sampled, "sampled orbit in D"),
        ];
        checks
            .iter()
            .find(|(ok, _)| !ok)
            .map(|(_, name)| *name)
            .unwrap_or("none")
    }

    fn failed_dimensions() -> Self {
        OrbitReport {
            dimensions: false,
            compact_dual: false,
            horizontal: false,
            mixed_hodge: false,
            polarized: false,
            sampled: false,
        }
    }
}

fn check_generators(sigma: &Cone) -> Result<Nilpotent, HodgeError> {
    for g in sigma.generators() {
        match g.nilpotency_index() {
            0..=2 => {}
            3 => return Err(HodgeError::NotSquareZero),
            _ => return Err(HodgeError::TypeThree),
        }
    }
    let n = sigma.interior_point()?;
    if !n.is_square_zero() {
        return Err(HodgeError::NotSquareZero);
    }
    Ok(n)
}

/// `W(σ)`: the weight filtration of the generator sum, or the pure filtration
/// for `σ = {0}`.
pub fn cone_weight_filtration(sigma: &Cone) -> Result<WeightFiltration, HodgeError> {
    let n = check_generators(sigma)?;
    if n.is_zero() {
        return Ok(WeightFiltration::pure(sigma.space()));
    }
    weight_filtration(&n)
}

/// Decides whether `(σ, exp(σ_ℂ)F)` is a nilpotent orbit for Hodge numbers `hn`.
pub fn check_nilpotent_orbit(
    sigma: &Cone,
    f: &Filtration,
    hn: &HodgeNumbers,
) -> Result<OrbitReport, HodgeError> {
    let n = check_generators(sigma)?;
    if sigma.space() != f.space() {
        return Err(HodgeError::AmbientMismatch);
    }
    let membership = match d_membership(f, hn) {
        Ok(m) => m,
        Err(HodgeError::DimensionMismatch { .. }) | Err(HodgeError::HodgeRank { .. }) => {
            return Ok(OrbitReport::failed_dimensions())
        }
        Err(e) => return Err(e),
    };
    let mut horizontal = true;
    for g in sigma.generators() {
        if !f.is_horizontal(&g.matrix().to_gauss())? {
            horizontal = false;
        }
    }
    let w = cone_weight_filtration(sigma)?;
    let mixed_hodge = check_mhs(&w, f);
    let polarized = mixed_hodge && polarized(&w, f, &n)?;
    let sampled = sampled_in_d(sigma, f, hn)?;
    Ok(OrbitReport {
        dimensions: true,
        compact_dual: membership.isotropic,
        horizontal,
        mixed_hodge,
        polarized,
        sampled,
    })
}

fn polarized(w: &WeightFiltration, f: &Filtration, n: &Nilpotent) -> Result<bool, HodgeError> {
    let split = deligne_splitting(w, f)?;
    let sp = f.space();
    let ng = n.matrix().to_gauss();
    for (&(p, q), piece) in split.pieces() {
        let gram = match p + q {
            0 => hermitian_gram_twisted(sp, piece.basis(), 2 * p, Some(&ng)),
            -1 => hermitian_gram_twisted(sp, piece.basis(), p - q, None),
            _ => continue,
        };
        if !is_positive_definite(&gram)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn sampled_in_d(sigma: &Cone, f: &Filtration, hn: &HodgeNumbers) -> Result<bool, HodgeError> {
    let gens: Vec<GaussMatrix> = sigma.generators().iter().map(|g| g.matrix().to_gauss()).collect();
    if gens.is_empty() {
        return is_in_d(f, hn);
    }
    let d = sigma.space().dim();
    let mut idx = vec![0usize; gens.len()];
    loop {
        let mut m = GaussMatrix::zeros(d, d);
        for (g, &k) in gens.iter().zip(&idx) {
            let t = GaussRational::new(rat(0), rat(SAMPLE_HEIGHTS[k]));
            m = m.add(&g.scale(&t))?;
        }
        let moved = f.transform(&m.exp_nilpotent()?)?;
        if !is_in_d(&moved, hn)? {
            return Ok(false);
        }
        let Some(pos) = idx.iter().position(|&k| k + 1 < SAMPLE_HEIGHTS.len()) else {
            break;
        };
        idx[pos] += 1;
        for k in idx.iter_mut().take(pos) {
            *k = 0;
        }
    }
    Ok(true)
}

/// Classifies a cone by the sign of `Q(•, N•)` on `H / (Im N)^⊥` for the
/// generator sum `N`, and cross-checks every witness through its Deligne
/// splitting. The zero cone is even.
pub fn classify_cone(sigma: &Cone, witnesses: &[BoundaryPoint]) -> Result<ConeType, HodgeError> {
    let n = check_generators(sigma)?;
    let verdict = if n.is_zero() {
        ConeType::Even
    } else {
        let s = image_subspace(&n)?;
        if in_eta_plus(&n, &s)? {
            ConeType::Even
        } else if in_eta_plus(&n.neg(), &s)? {
            ConeType::Odd
        } else {
            ConeType::Neither
        }
    };
    if witnesses.is_empty() {
        return Ok(verdict);
    }
    let w = cone_weight_filtration(sigma)?;
    for (i, wit) in witnesses.iter().enumerate() {
        let report = check_nilpotent_orbit(sigma, &wit.filtration, &wit.hodge_numbers)?;
        if !report.passes() {
            return Err(HodgeError::NotNilpotentOrbit(format!(
                "witness {i} fails {}",
                report.first_failure()
            )));
        }
        let parity = splitting_parity(&deligne_splitting(&w, &wit.filtration)?);
        let agrees = if n.is_zero() {
            true
        } else {
            parity.even == (verdict == ConeType::Even) && parity.odd == (verdict == ConeType::Odd)
        };
        if !agrees {
            return Err(HodgeError::InconsistentClassification(format!(
                "sign criterion says {verdict}, witness {i} has parity even={} odd={}",
                parity.even, parity.odd
            )));
        }
    }
    Ok(verdict)
}
