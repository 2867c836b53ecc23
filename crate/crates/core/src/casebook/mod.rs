//! The `(1, 1, 1, 1)` casebook: seven executable claims about nilpotent cones
//! in `sp(2, ℚ)`, plus the dimension-bound evaluator.

mod dim_bound;
mod report;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::docs::{self, DocError, HodgeDoc, LabeledNilpotent, OrbitDoc};
use crate::fans::{build_sigma_s, filter_sigma_ev, validate_fan, Cone, Fan, FanError};
use crate::hodge::{
    breve_lift, classify_cone, cone_weight_filtration, deligne_splitting, graded_hodge_numbers,
    graded_piece, is_in_d, same_orbit, tilde_map, Filtration, HodgeError, HodgeNumbers,
};
use crate::linalg::{format_rational, Subspace};
use crate::symplectic::{
    eta_basis, eta_to_sym, image_subspace, in_eta_plus, Nilpotent, SymplecticError, SymplecticSpace,
};

pub use dim_bound::{dim_bound, DimBound, DimBoundInput};
pub use report::{CaseReport, Claim, Provenance, Verdict};

/// The stored casebook documents.
pub mod data {
    pub const NILPOTENTS: &str = include_str!("../../casebook/nilpotents.json");
    /// A type-I boundary point of `D`.
    pub const TYPE_ONE_ORBIT: &str = include_str!("../../casebook/type_one_orbit.json");
    /// A type-II boundary point of `D`.
    pub const TYPE_TWO_ORBIT: &str = include_str!("../../casebook/type_two_orbit.json");
    /// The Siegel-side image of the type-I point, with the lift target.
    pub const SIEGEL_TYPE_ONE: &str = include_str!("../../casebook/siegel_type_one.json");
    /// A Siegel-side boundary point on the ray of `−N_II`.
    pub const SIEGEL_TYPE_TWO: &str = include_str!("../../casebook/siegel_type_two.json");
}

#[derive(Debug, Error)]
pub enum CasebookError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Doc(#[from] DocError),
    #[error(transparent)]
    Hodge(#[from] HodgeError),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Symplectic(#[from] SymplecticError),
}

/// Classification of a nilpotent in `sp(2)` by `dim Im N` and nilpotency.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NilpotentType {
    Zero,
    /// `N² = 0`, `dim Im N = 1`.
    I,
    /// `N² = 0`, `dim Im N = 2`.
    II,
    /// `N³ ≠ 0`, `N⁴ = 0`.
    III,
    Other,
}

impl fmt::Display for NilpotentType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NilpotentType::Zero => "zero",
            NilpotentType::I => "I",
            NilpotentType::II => "II",
            NilpotentType::III => "III",
            NilpotentType::Other => "other",
        })
    }
}

pub fn nilpotent_type(n: &Nilpotent) -> NilpotentType {
    match (n.nilpotency_index(), n.rank()) {
        (0, _) | (_, 0) => NilpotentType::Zero,
        (2, 1) => NilpotentType::I,
        (2, 2) => NilpotentType::II,
        (4, _) => NilpotentType::III,
        _ => NilpotentType::Other,
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CasebookOptions {
    /// Replaces `h^{0,−1}` (and `h^{1,−2}` by `2 − h^{0,−1}`) in the claims
    /// that depend on it.
    pub h01: Option<usize>,
    /// Adds the type-III nilpotent to the fan input.
    pub inject_type_three: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CaseData {
    n: usize,
    hodge: HodgeDoc,
    nilpotents: Vec<LabeledNilpotent>,
    fan_rays: Vec<LabeledNilpotent>,
}

struct Loaded {
    sp: SymplecticSpace,
    hodge: HodgeNumbers,
    nilpotents: Vec<(String, String, Nilpotent)>,
    fan_rays: Vec<(String, String, Nilpotent)>,
    raw: Vec<LabeledNilpotent>,
    point_one: (Cone, Filtration, HodgeNumbers),
    point_two: (Cone, Filtration, HodgeNumbers),
    siegel_two: (Cone, Filtration),
}

fn labeled(sp: SymplecticSpace, field: &str, items: &[LabeledNilpotent]) -> Result<Vec<(String, String, Nilpotent)>, DocError> {
    items
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let n = docs::nilpotent_from_doc(&format!("{field}[{i}].matrix"), sp, &x.matrix)?;
            Ok((x.label.clone(), x.kind.clone(), n))
        })
        .collect()
}

fn load() -> Result<Loaded, CasebookError> {
    let data: CaseData = docs::parse(data::NILPOTENTS)?;
    let sp = SymplecticSpace::new(data.n);
    let hodge = docs::hodge_from_doc("hodge", &data.hodge)?;
    let nilpotents = labeled(sp, "nilpotents", &data.nilpotents)?;
    let fan_rays = labeled(sp, "fan_rays", &data.fan_rays)?;
    let point_one = docs::parse::<OrbitDoc>(data::TYPE_ONE_ORBIT)?.parts()?;
    let point_two = docs::parse::<OrbitDoc>(data::TYPE_TWO_ORBIT)?.parts()?;
    let (c, f, _) = docs::parse::<OrbitDoc>(data::SIEGEL_TYPE_TWO)?.parts()?;
    Ok(Loaded {
        sp,
        hodge,
        nilpotents,
        fan_rays,
        raw: data.nilpotents,
        point_one,
        point_two,
        siegel_two: (c, f),
    })
}

impl Loaded {
    fn nilpotent(&self, label: &str) -> Result<&Nilpotent, CasebookError> {
        self.nilpotents
            .iter()
            .find(|(l, _, _)| l == label)
            .map(|(_, _, n)| n)
            .ok_or_else(|| CasebookError::InvalidInput(format!("no nilpotent labeled {label}")))
    }
}

/// `(p,q)` keys of the nonzero pieces, each with its dimension.
fn format_dims(dims: &BTreeMap<(i32, i32), usize>) -> String {
    dims.iter()
        .filter(|(_, &d)| d > 0)
        .map(|((p, q), d)| format!("({p},{q})={d}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn format_hodge(h: &HodgeNumbers) -> String {
    let dims: BTreeMap<(i32, i32), usize> = h.entries().iter().map(|(&p, &v)| ((p, -1 - p), v)).collect();
    format_dims(&dims)
}

fn claim_one(l: &Loaded) -> (String, Result<String, CasebookError>) {
    let expected = l
        .nilpotents
        .iter()
        .map(|(label, kind, _)| format!("{label}:{kind}"))
        .collect::<Vec<_>>()
        .join(" ");
    let computed = l
        .nilpotents
        .iter()
        .map(|(label, _, n)| format!("{label}:{}", nilpotent_type(n)))
        .collect::<Vec<_>>()
        .join(" ");
    (expected, Ok(computed))
}

fn claim_two(l: &Loaded) -> (String, Result<String, CasebookError>) {
    let diagram_one = "(-2,1)=1 (-1,-1)=1 (0,0)=1 (1,-2)=1";
    let diagram_two = "(-2,0)=1 (-1,1)=1 (0,-2)=1 (1,-1)=1";
    let expected = format!("N_I: even [{diagram_one}]; N_II: odd [{diagram_two}]");
    let computed = (|| {
        let mut parts = Vec::new();
        for (label, (cone, f, h)) in [("N_I", &l.point_one), ("N_II", &l.point_two)] {
            let n = l.nilpotent(label)?;
            if !cone.same_as(&Cone::ray(n.clone())) {
                return Ok(format!("{label}: witness cone differs from the stored nilpotent"));
            }
            let witness = crate::hodge::BoundaryPoint::from_parts(cone.clone(), f.clone(), h.clone());
            let verdict = classify_cone(cone, &[witness])?;
            let w = cone_weight_filtration(cone)?;
            let split = deligne_splitting(&w, f)?;
            parts.push(format!("{label}: {verdict} [{}]", format_dims(&split.dims())));
        }
        Ok(parts.join("; "))
    })();
    (expected, computed)
}

fn claim_three(l: &Loaded, h01: usize, inject: bool) -> (String, Result<String, CasebookError>) {
    let mut rays = l.fan_rays.clone();
    if inject {
        if let Ok(n) = l.nilpotent("N_III") {
            rays.push(("N_III".into(), "III".into(), n.clone()));
        }
    }
    let keep_kind = |k: &str| (k == "I" && h01 >= 1) || (k == "II" && h01 >= 2);
    let kept_expected: Vec<&str> = std::iter::once("0")
        .chain(rays.iter().filter(|(_, k, _)| keep_kind(k)).map(|(l, _, _)| l.as_str()))
        .collect();
    let expected = format!("guard ok; fan valid; kept: {}; type-I rays in eta+: true", kept_expected.join(" "));
    let computed = (|| {
        if let Some((label, _, _)) = rays.iter().find(|(_, _, n)| !n.is_square_zero()) {
            return Ok(format!("guard tripped: N^2 != 0 for {label}"));
        }
        let mut cones = vec![Cone::zero(l.sp)];
        cones.extend(rays.iter().map(|(_, _, n)| Cone::ray(n.clone())));
        let fan = Fan::new(l.sp, cones, vec![])?;
        let valid = validate_fan(&fan).is_valid();
        let kept = filter_sigma_ev(&fan, h01)?;
        let mut labels = Vec::new();
        for c in kept.cones() {
            if c.is_zero() {
                labels.push("0".to_string());
            } else if let Some((label, _, _)) = rays.iter().find(|(_, _, n)| c.same_as(&Cone::ray(n.clone()))) {
                labels.push(label.clone());
            }
        }
        let mut eta_plus = true;
        for (_, kind, n) in &rays {
            if kind == "I" {
                eta_plus &= in_eta_plus(n, &image_subspace(n)?)?;
            }
        }
        Ok::<_, CasebookError>(format!(
            "guard ok; fan {}; kept: {}; type-I rays in eta+: {eta_plus}",
            if valid { "valid" } else { "invalid" },
            labels.join(" ")
        ))
    })();
    (expected, computed)
}

fn claim_four(l: &Loaded) -> (String, Result<String, CasebookError>) {
    let expected = "dim eta(Im N) = 3 > 1 = max cone dim in Sigma_2; Sigma(S) restricts to Sigma(S'): true".to_string();
    let computed = (|| {
        let n2 = l.nilpotent("N_II")?;
        let s = image_subspace(n2)?;
        let dim_eta = eta_basis(&s).len();
        let max_dim = l
            .fan_rays
            .iter()
            .filter(|(_, k, _)| k == "II")
            .map(|(_, _, n)| Cone::ray(n.clone()).dim())
            .max()
            .unwrap_or(0);
        let rel = if dim_eta > max_dim { ">" } else { "<=" };
        // Σ(S) cut down to η(S') for the line S' = Im N_I inside S.
        let s_prime = image_subspace(l.nilpotent("N_I")?)?;
        let inside = s.subspace().contains(s_prime.subspace());
        let big = build_sigma_s(&s, 3)?;
        let mut restricted = BTreeSet::new();
        for c in big.cones() {
            let mut in_eta = true;
            for g in c.generators() {
                in_eta &= eta_to_sym(&s_prime, g)?.is_some();
            }
            if in_eta {
                restricted.insert(c.key());
            }
        }
        let small: BTreeSet<_> = build_sigma_s(&s_prime, 1)?.cones().iter().map(|c| c.key()).collect();
        Ok::<_, CasebookError>(format!(
            "dim eta(Im N) = {dim_eta} {rel} {max_dim} = max cone dim in Sigma_2; Sigma(S) restricts to Sigma(S'): {}",
            inside && restricted == small
        ))
    })();
    (expected, computed)
}

fn lift_outcome(
    cone: &Cone,
    f_tor: &Filtration,
    hn: &HodgeNumbers,
) -> Result<String, CasebookError> {
    match breve_lift(cone, f_tor, hn) {
        Ok(pt) => {
            let w = cone_weight_filtration(cone)?;
            let back = tilde_map(&w, &pt.filtration)?;
            let exact = same_orbit(cone, &back, f_tor)?.is_some();
            Ok(format!("lifts, round trip {}", if exact { "exact" } else { "fails" }))
        }
        Err(HodgeError::Obstruction { m, h01 }) => Ok(format!("obstructed (m = {m} > h01 = {h01})")),
        Err(e) => Ok(format!("error: {e}")),
    }
}

fn expected_lift(m: usize, h01: usize) -> String {
    if m <= h01 {
        "lifts, round trip exact".into()
    } else {
        format!("obstructed (m = {m} > h01 = {h01})")
    }
}

/// Hodge numbers on `p = 1, 0, −1, −2` with `h^{0,−1} = k`, `h^{1,−2} = 2 − k`.
fn hodge_with_h01(k: usize) -> Result<HodgeNumbers, CasebookError> {
    if k > 2 {
        return Err(CasebookError::InvalidInput(format!("h^(0,-1) = {k} exceeds n = 2")));
    }
    Ok(HodgeNumbers::from_pairs(&[(1, 2 - k), (0, k), (-1, k), (-2, 2 - k)])?)
}

fn claim_five(l: &Loaded, h01: usize) -> (String, Result<String, CasebookError>) {
    let expected = format!("type I: {}; type II: {}", expected_lift(1, h01), expected_lift(2, h01));
    let computed = (|| {
        let hn = hodge_with_h01(h01)?;
        let (cone, f, _) = &l.point_one;
        let w = cone_weight_filtration(cone)?;
        let f_tor = tilde_map(&w, f)?;
        let one = lift_outcome(cone, &f_tor, &hn)?;
        let (cone2, f2) = &l.siegel_two;
        if !cone2.same_as(&Cone::ray(l.nilpotent("N_II")?.neg())) {
            return Ok("Siegel input is not on the ray of -N_II".to_string());
        }
        let two = lift_outcome(cone2, f2, &hn)?;
        Ok(format!("type I: {one}; type II: {two}"))
    })();
    (expected, computed)
}

fn claim_six(l: &Loaded) -> (String, Result<String, CasebookError>) {
    let expected = "bound = 2, equality: true".to_string();
    let computed = (|| {
        let (cone, f, h) = &l.point_one;
        let pt = crate::hodge::BoundaryPoint::from_parts(cone.clone(), f.clone(), h.clone());
        let h_prime = graded_hodge_numbers(&graded_piece(&pt)?)?;
        let input = DimBoundInput {
            n: l.sp.n(),
            m: cone.interior_point()?.rank(),
            dim_sigma: cone.dim(),
            h_prime,
            hodge: Some(l.hodge.clone()),
        };
        let b = dim_bound(&input)?;
        Ok::<_, CasebookError>(format!(
            "bound = {}, equality: {}",
            format_rational(&b.bound),
            b.is_equality_case
        ))
    })();
    (expected, computed)
}

fn claim_seven(l: &Loaded) -> (String, Result<String, CasebookError>) {
    let expected = "h' = (-2,1)=1 (1,-2)=1; in D': true; conj(F'^1) in H_1: true".to_string();
    let computed = (|| {
        let (cone, f, h) = &l.point_one;
        let pt = crate::hodge::BoundaryPoint::from_parts(cone.clone(), f.clone(), h.clone());
        let gr = graded_piece(&pt)?;
        let hp = graded_hodge_numbers(&gr)?;
        let in_d = is_in_d(&gr, &hp)?;
        let sub = gr.space();
        let d = sub.dim();
        let siegel = Filtration::new(
            sub,
            vec![(-1, Subspace::full(d)), (0, gr.get(1).conj()), (1, Subspace::zero(d))],
        )?;
        let in_h = is_in_d(&siegel, &HodgeNumbers::siegel(sub.n()))?;
        Ok::<_, CasebookError>(format!(
            "h' = {}; in D': {in_d}; conj(F'^1) in H_1: {in_h}",
            format_hodge(&hp)
        ))
    })();
    (expected, computed)
}

/// Runs the seven casebook claims. Failures are reported as verdicts;
/// only a broken stored document or an invalid option is an error.
pub fn run_casebook_1111(opts: &CasebookOptions) -> Result<CaseReport, CasebookError> {
    let l = load()?;
    let h01 = opts.h01.unwrap_or_else(|| l.hodge.h01());
    hodge_with_h01(h01)?;
    let mut claims = Vec::new();
    let mut push = |id: usize, description: &str, provenance: Provenance, (expected, computed): (String, Result<String, CasebookError>)| {
        let computed = computed.unwrap_or_else(|e| format!("error: {e}"));
        claims.push(Claim::new(id, description, provenance, expected, computed));
    };
    push(
        1,
        "stored nilpotents classify into types I/II/III by dim Im N and nilpotency",
        Provenance::Published,
        claim_one(&l),
    );
    push(
        2,
        "type I is even and type II is odd, with Deligne splittings matching diagrams (I) and (II)",
        Provenance::Published,
        claim_two(&l),
    );
    push(
        3,
        "the Sigma_ev filter keeps exactly the rays with dim Im N <= h^(0,-1)",
        Provenance::Published,
        claim_three(&l, h01, opts.inject_type_three),
    );
    push(
        4,
        "a type-II ray has dim eta(Im N) = 3, above the rank of every cone of Sigma_2",
        Provenance::Published,
        claim_four(&l),
    );
    push(
        5,
        "breve lift exists exactly when dim Im N <= h^(0,-1)",
        Provenance::Published,
        claim_five(&l, h01),
    );
    push(
        6,
        "dimension bound on the type-I data is 2 with equality",
        Provenance::Derived,
        claim_six(&l),
    );
    push(
        7,
        "the graded piece of the type-I point lies in D', the conjugate upper half plane",
        Provenance::Published,
        claim_seven(&l),
    );
    let artifacts = json!({
        "nilpotents": l.raw,
        "hodge": docs::hodge_to_doc(&l.hodge),
        "cited": {
            "dim_B_sigma_2": 1,
            "dim_B_tor_sigma_2": 2,
            "note": "quoted values for the type-II boundary component, not recomputed"
        },
    });
    Ok(CaseReport {
        case_id: "1111".into(),
        h01,
        inject_type_three: opts.inject_type_three,
        claims,
        artifacts,
    })
}
