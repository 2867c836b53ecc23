use num_traits::Zero;

use super::matrix::Matrix;
use super::scalar::{Field, GaussRational, Rational};
use super::LinalgError;

/// A linear subspace of `T^ambient_dim`.
///
/// The basis is kept in reduced echelon form (pivots normalized to 1, sorted by
/// pivot position), so two equal subspaces always have identical bases and
/// equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace<T> {
    ambient_dim: usize,
    basis: Vec<Vec<T>>,
    pivots: Vec<usize>,
}

pub type RatSubspace = Subspace<Rational>;
pub type GaussSubspace = Subspace<GaussRational>;

/// Result of comparing two subspaces of the same ambient space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceOps<T> {
    pub intersect: Subspace<T>,
    pub sum: Subspace<T>,
    /// `B ⊆ A`.
    pub contains: bool,
}

impl<T: Field> Subspace<T> {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim)
            .map(|i| super::unit_vector(ambient_dim, i))
            .collect();
        Subspace {
            ambient_dim,
            basis,
            pivots: (0..ambient_dim).collect(),
        }
    }

    /// Span of arbitrary vectors. Vectors of the wrong length are rejected.
    pub fn span(ambient_dim: usize, vectors: &[Vec<T>]) -> Result<Self, LinalgError> {
        let m = Matrix::from_rows(ambient_dim, vectors)?;
        Ok(Self::row_space(&m))
    }

    pub(crate) fn span_unchecked(ambient_dim: usize, vectors: Vec<Vec<T>>) -> Self {
        let n = vectors.len();
        let data = vectors.into_iter().flatten().collect();
        let m = Matrix::from_vec(n, ambient_dim, data).expect("vector lengths");
        Self::row_space(&m)
    }

    /// Span of the rows of `m`.
    pub fn row_space(m: &Matrix<T>) -> Self {
        let (r, pivots) = m.rref();
        let basis = (0..pivots.len()).map(|i| r.row(i)).collect();
        Subspace {
            ambient_dim: m.cols(),
            basis,
            pivots,
        }
    }

    /// Span of the columns of `m`.
    pub fn column_space(m: &Matrix<T>) -> Self {
        Self::row_space(&m.transpose())
    }

    /// `{x : Mx = 0}`.
    pub fn kernel_of(m: &Matrix<T>) -> Self {
        Self::span_unchecked(m.cols(), m.kernel_vectors())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient_dim
    }

    pub fn basis(&self) -> &[Vec<T>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis vectors as the columns of an `ambient_dim × dim` matrix.
    pub fn basis_matrix(&self) -> Matrix<T> {
        Matrix::from_columns(self.ambient_dim, &self.basis).expect("basis lengths")
    }

    /// Residue of `v` after eliminating against the echelon basis.
    fn residue(&self, v: &[T]) -> Vec<T> {
        let mut r = v.to_vec();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            if r[p].is_zero() {
                continue;
            }
            let f = r[p].clone();
            for (x, y) in r.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x = std::mem::replace(x, T::zero()) - f.clone() * y;
                }
            }
        }
        r
    }

    pub fn contains_vector(&self, v: &[T]) -> bool {
        v.len() == self.ambient_dim && self.residue(v).iter().all(Zero::is_zero)
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Self) -> bool {
        other.ambient_dim == self.ambient_dim
            && other.dim() <= self.dim()
            && other.basis.iter().all(|v| self.contains_vector(v))
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[T]) -> Option<Vec<T>> {
        if !self.contains_vector(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn sum(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_same_ambient(other)?;
        if other.is_zero() || self.contains(other) {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Ok(Self::span_unchecked(self.ambient_dim, vs))
    }

    /// Intersection by the Zassenhaus algorithm.
    pub fn intersect(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_same_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.ambient_dim));
        }
        if self.contains(other) {
            return Ok(other.clone());
        }
        if other.contains(self) {
            return Ok(self.clone());
        }
        let d = self.ambient_dim;
        let mut rows = Vec::with_capacity(self.dim() + other.dim());
        for v in &self.basis {
            let mut r = v.clone();
            r.extend(v.iter().cloned());
            rows.push(r);
        }
        for v in &other.basis {
            let mut r = v.clone();
            r.extend(std::iter::repeat_n(T::zero(), d));
            rows.push(r);
        }
        let (red, pivots) = Matrix::from_rows(2 * d, &rows)?.rref();
        let meet: Vec<Vec<T>> = pivots
            .iter()
            .enumerate()
            .filter(|(_, &p)| p >= d)
            .map(|(i, _)| red.row(i)[d..].to_vec())
            .collect();
        Ok(Self::span_unchecked(d, meet))
    }

    pub fn ops(&self, other: &Self) -> Result<SubspaceOps<T>, LinalgError> {
        Ok(SubspaceOps {
            intersect: self.intersect(other)?,
            sum: self.sum(other)?,
            contains: self.contains(other),
        })
    }

    /// Image under a linear map given as a square or rectangular matrix.
    pub fn image_under(&self, m: &Matrix<T>) -> Result<Self, LinalgError> {
        if m.cols() != self.ambient_dim {
            return Err(LinalgError::Shape(format!(
                "map with {} columns applied to subspace of {}",
                m.cols(),
                self.ambient_dim
            )));
        }
        let images = self
            .basis
            .iter()
            .map(|v| m.mul_vec(v))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::span_unchecked(m.rows(), images))
    }

    pub fn conj(&self) -> Self {
        Subspace {
            ambient_dim: self.ambient_dim,
            basis: self.basis.iter().map(|v| super::vec_conj(v)).collect(),
            pivots: self.pivots.clone(),
        }
    }

    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    /// Annihilator `{f : f·v = 0 for all v}` under the bilinear dot product.
    pub fn annihilator(&self) -> Self {
        if self.is_zero() {
            return Self::full(self.ambient_dim);
        }
        Self::kernel_of(&Matrix::from_rows(self.ambient_dim, &self.basis).expect("basis"))
    }

    /// Extends the echelon basis greedily by standard basis vectors until the
    /// whole space is spanned, returning the indices of the vectors added.
    pub fn complement_indices(&self) -> Vec<usize> {
        let mut current = self.clone();
        let mut added = Vec::new();
        for i in 0..self.ambient_dim {
            if current.is_full() {
                break;
            }
            let e = super::unit_vector(self.ambient_dim, i);
            if !current.contains_vector(&e) {
                current = current
                    .sum(&Self::span_unchecked(self.ambient_dim, vec![e]))
                    .expect("same ambient");
                added.push(i);
            }
        }
        added
    }

    fn check_same_ambient(&self, other: &Self) -> Result<(), LinalgError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(LinalgError::AmbientMismatch(
                self.ambient_dim,
                other.ambient_dim,
            ));
        }
        Ok(())
    }
}

impl RatSubspace {
    pub fn to_gauss(&self) -> GaussSubspace {
        Subspace {
            ambient_dim: self.ambient_dim,
            basis: self
                .basis
                .iter()
                .map(|v| super::to_gauss_vec(v))
                .collect(),
            pivots: self.pivots.clone(),
        }
    }
}

impl GaussSubspace {
    /// The rational subspace with the same span, when the span is defined over ℚ.
    pub fn to_rational(&self) -> Option<RatSubspace> {
        if !self.basis.iter().flatten().all(GaussRational::is_real) {
            return None;
        }
        Some(Subspace {
            ambient_dim: self.ambient_dim,
            basis: self
                .basis
                .iter()
                .map(|v| v.iter().map(|x| x.re.clone()).collect())
                .collect(),
            pivots: self.pivots.clone(),
        })
    }
}

/// `(ker M, im M)` in canonical form.
pub fn kernel_image<T: Field>(m: &Matrix<T>) -> (Subspace<T>, Subspace<T>) {
    (Subspace::kernel_of(m), Subspace::column_space(m))
}
