//! JSON document formats.
//!
//! Rationals are strings `"p/q"` (bare integers are also accepted), Gaussian
//! rationals are `{"re": "p/q", "im": "r/s"}`, matrices are row-major arrays
//! of arrays, filtrations are lists of `{"p": k, "basis": [...]}` with basis
//! vectors as rows, and cones are `{"generators": [matrix, ...]}`.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fans::{Cone, FanError};
use crate::hodge::{Filtration, HodgeError, HodgeNumbers};
use crate::linalg::{
    format_rational, parse_rational, GaussMatrix, GaussRational, GaussSubspace, RatMatrix,
    Rational, Subspace,
};
use crate::symplectic::{Nilpotent, SymplecticError, SymplecticSpace};

#[derive(Debug, Error)]
pub enum DocError {
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("field `{field}`: {msg}")]
    Field { field: String, msg: String },
}

fn field_err(field: impl Into<String>, msg: impl fmt::Display) -> DocError {
    DocError::Field {
        field: field.into(),
        msg: msg.to_string(),
    }
}

/// An exact rational in a document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Q(pub Rational);

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

struct QVisitor;

impl Visitor<'_> for QVisitor {
    type Value = Q;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a rational string \"p/q\" or an integer")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Q, E> {
        parse_rational(v)
            .map(Q)
            .ok_or_else(|| E::custom(format!("invalid rational {v:?}")))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Q, E> {
        Ok(Q(Rational::from_integer(v.into())))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Q, E> {
        Ok(Q(Rational::from_integer(v.into())))
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        d.deserialize_any(QVisitor)
    }
}

/// A Gaussian rational in a document. Plain rationals are read as real.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct G(pub GaussRational);

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GaussParts {
    re: Q,
    #[serde(default = "zero_q")]
    im: Q,
}

fn zero_q() -> Q {
    Q(Rational::from_integer(0.into()))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GaussForm {
    Parts(GaussParts),
    Real(Q),
}

impl Serialize for G {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GaussParts {
            re: Q(self.0.re.clone()),
            im: Q(self.0.im.clone()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for G {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<G, D::Error> {
        match GaussForm::deserialize(d)
            .map_err(|_| de::Error::custom("expected {\"re\": \"p/q\", \"im\": \"r/s\"} or a rational"))?
        {
            GaussForm::Parts(p) => Ok(G(GaussRational::new(p.re.0, p.im.0))),
            GaussForm::Real(q) => Ok(G(GaussRational::real(q.0))),
        }
    }
}

pub type MatrixDoc = Vec<Vec<Q>>;
pub type GaussMatrixDoc = Vec<Vec<G>>;

pub fn rat_matrix_from_doc(field: &str, m: &MatrixDoc) -> Result<RatMatrix, DocError> {
    let cols = m.first().map_or(0, |r| r.len());
    if let Some(i) = m.iter().position(|r| r.len() != cols) {
        return Err(field_err(format!("{field}[{i}]"), format!("expected {cols} entries")));
    }
    let entries: Vec<Rational> = m.iter().flatten().map(|q| q.0.clone()).collect();
    RatMatrix::from_vec(m.len(), cols, entries).map_err(|e| field_err(field, e))
}

pub fn rat_matrix_to_doc(m: &RatMatrix) -> MatrixDoc {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| Q(x.clone())).collect())
        .collect()
}

pub fn gauss_rows_from_doc(field: &str, m: &GaussMatrixDoc, width: usize) -> Result<Vec<Vec<GaussRational>>, DocError> {
    m.iter()
        .enumerate()
        .map(|(i, r)| {
            if r.len() != width {
                Err(field_err(format!("{field}[{i}]"), format!("expected {width} entries, found {}", r.len())))
            } else {
                Ok(r.iter().map(|g| g.0.clone()).collect())
            }
        })
        .collect()
}

pub fn gauss_rows_to_doc(rows: &[Vec<GaussRational>]) -> GaussMatrixDoc {
    rows.iter().map(|r| r.iter().map(|x| G(x.clone())).collect()).collect()
}

pub fn gauss_matrix_to_doc(m: &GaussMatrix) -> GaussMatrixDoc {
    gauss_rows_to_doc(&m.row_vectors())
}

/// `{"p": k, "basis": [...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiltrationStep {
    pub p: i32,
    pub basis: GaussMatrixDoc,
}

pub fn filtration_from_doc(
    field: &str,
    space: SymplecticSpace,
    steps: &[FiltrationStep],
) -> Result<Filtration, DocError> {
    let d = space.dim();
    let mut pairs = Vec::new();
    for (i, step) in steps.iter().enumerate() {
        let f = format!("{field}[{i}].basis");
        let rows = gauss_rows_from_doc(&f, &step.basis, d)?;
        let sub: GaussSubspace = Subspace::span(d, &rows).map_err(|e| field_err(&f, e))?;
        pairs.push((step.p, sub));
    }
    pairs.sort_by_key(|(p, _)| *p);
    Filtration::new(space, pairs).map_err(|e| field_err(field, e))
}

pub fn filtration_to_doc(f: &Filtration) -> Vec<FiltrationStep> {
    f.pairs()
        .into_iter()
        .map(|(p, sub)| FiltrationStep {
            p,
            basis: gauss_rows_to_doc(sub.basis()),
        })
        .collect()
}

/// `{"generators": [matrix, ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeDoc {
    pub generators: Vec<MatrixDoc>,
}

pub fn nilpotent_from_doc(field: &str, space: SymplecticSpace, m: &MatrixDoc) -> Result<Nilpotent, DocError> {
    let d = space.dim();
    let mat = rat_matrix_from_doc(field, m)?;
    if mat.rows() != d || mat.cols() != d {
        return Err(field_err(
            field,
            format!("expected a {d}x{d} matrix, found {}x{}", mat.rows(), mat.cols()),
        ));
    }
    Nilpotent::new(space, mat).map_err(|e| field_err(field, e))
}

pub fn cone_from_doc(field: &str, space: SymplecticSpace, c: &ConeDoc) -> Result<Cone, DocError> {
    let gens = c
        .generators
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let name = if field.is_empty() {
                format!("generators[{i}]")
            } else {
                format!("{field}.generators[{i}]")
            };
            nilpotent_from_doc(&name, space, m)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Cone::new(space, gens).map_err(|e| field_err(field, e))
}

pub fn cone_to_doc(c: &Cone) -> ConeDoc {
    ConeDoc {
        generators: c.generators().iter().map(|g| rat_matrix_to_doc(g.matrix())).collect(),
    }
}

/// Hodge numbers as `{"p": h^{p,−p−1}}`.
pub type HodgeDoc = BTreeMap<String, usize>;

pub fn hodge_from_doc(field: &str, h: &HodgeDoc) -> Result<HodgeNumbers, DocError> {
    let mut out = BTreeMap::new();
    for (k, &v) in h {
        let p: i32 = k
            .trim()
            .parse()
            .map_err(|_| field_err(format!("{field}.{k}"), "key must be an integer p"))?;
        out.insert(p, v);
    }
    HodgeNumbers::new(out).map_err(|e| field_err(field, e))
}

pub fn hodge_to_doc(h: &HodgeNumbers) -> HodgeDoc {
    h.entries().iter().map(|(p, v)| (p.to_string(), *v)).collect()
}

/// Input of `classify`: a cone, or a single matrix.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NilpotentDoc {
    pub n: usize,
    #[serde(default)]
    pub matrix: Option<MatrixDoc>,
    #[serde(default)]
    pub generators: Option<Vec<MatrixDoc>>,
}

impl NilpotentDoc {
    pub fn cone(&self) -> Result<Cone, DocError> {
        let sp = SymplecticSpace::new(self.n);
        match (&self.matrix, &self.generators) {
            (Some(m), None) => {
                let n = nilpotent_from_doc("matrix", sp, m)?;
                Cone::new(sp, vec![n]).map_err(|e| field_err("matrix", e))
            }
            (None, Some(g)) => cone_from_doc("", sp, &ConeDoc { generators: g.clone() }),
            _ => Err(field_err("matrix", "give exactly one of `matrix` or `generators`")),
        }
    }
}

/// A nilpotent with a label and an expected type, as stored in the casebook.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabeledNilpotent {
    pub label: String,
    #[serde(rename = "type")]
    pub kind: String,
    pub matrix: MatrixDoc,
}

/// Input of `fan`: an isotropic subspace by basis rows.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubspaceDoc {
    pub n: usize,
    pub basis: MatrixDoc,
    #[serde(default)]
    pub word_bound: Option<usize>,
}

/// Input of `reduce`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormDoc {
    pub form: MatrixDoc,
}

/// Input of `check-orbit` and `lift`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitDoc {
    pub n: usize,
    pub hodge: HodgeDoc,
    pub cone: ConeDoc,
    pub filtration: Vec<FiltrationStep>,
    /// Target Hodge numbers for `lift`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_hodge: Option<HodgeDoc>,
}

impl OrbitDoc {
    pub fn parts(&self) -> Result<(Cone, Filtration, HodgeNumbers), DocError> {
        let sp = SymplecticSpace::new(self.n);
        let cone = cone_from_doc("cone", sp, &self.cone)?;
        let f = filtration_from_doc("filtration", sp, &self.filtration)?;
        let h = hodge_from_doc("hodge", &self.hodge)?;
        Ok((cone, f, h))
    }

    pub fn from_parts(cone: &Cone, f: &Filtration, h: &HodgeNumbers) -> Self {
        OrbitDoc {
            n: cone.space().n(),
            hodge: hodge_to_doc(h),
            cone: cone_to_doc(cone),
            filtration: filtration_to_doc(f),
            target_hodge: None,
        }
    }
}

/// Input of `dim-bound`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimBoundDoc {
    pub n: usize,
    pub m: usize,
    pub dim_sigma: usize,
    pub h_prime: HodgeDoc,
    /// Ambient Hodge numbers, used only for the equality flag.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hodge: Option<HodgeDoc>,
}

/// Parses a document, mapping serde errors to line/column diagnostics.
pub fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, DocError> {
    Ok(serde_json::from_str(text)?)
}

impl From<HodgeError> for DocError {
    fn from(e: HodgeError) -> Self {
        field_err("document", e)
    }
}

impl From<FanError> for DocError {
    fn from(e: FanError) -> Self {
        field_err("document", e)
    }
}

impl From<SymplecticError> for DocError {
    fn from(e: SymplecticError) -> Self {
        field_err("document", e)
    }
}
