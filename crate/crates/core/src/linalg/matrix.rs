use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::Zero;

use super::scalar::{Field, GaussRational, Rational};
use super::LinalgError;

/// Dense row-major matrix over a [`Field`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type RatMatrix = Matrix<Rational>;
pub type GaussMatrix = Matrix<GaussRational>;

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:?}", self.data[r * self.cols + c])?;
            }
        }
        write!(f, "]")
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl<T: Field> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::Shape(format!(
                "{} entries for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Builds a matrix from row vectors. All rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: &[Vec<T>]) -> Result<Self, LinalgError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(LinalgError::Shape(format!(
                    "row {} has length {}, expected {}",
                    i,
                    r.len(),
                    cols
                )));
            }
            data.extend(r.iter().cloned());
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Builds a matrix whose columns are the given vectors of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<T>]) -> Result<Self, LinalgError> {
        Ok(Self::from_rows(rows, columns)?.transpose())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, r: usize) -> Vec<T> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn conj(&self) -> Self {
        self.map(Field::conj)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        self.transpose().conj()
    }

    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.clone() * s)
    }

    pub fn add(&self, o: &Self) -> Result<Self, LinalgError> {
        self.same_shape(o)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| a.clone() + b)
                .collect(),
        })
    }

    pub fn sub(&self, o: &Self) -> Result<Self, LinalgError> {
        self.same_shape(o)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| a.clone() - b)
                .collect(),
        })
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x.clone())
    }

    pub fn mul(&self, o: &Self) -> Result<Self, LinalgError> {
        if self.cols != o.rows {
            return Err(LinalgError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = Self::zeros(self.rows, o.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..o.cols {
                    let b = &o[(k, c)];
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.clone() * b;
                    let slot = &mut out[(r, c)];
                    *slot = std::mem::replace(slot, T::zero()) + prod;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::Shape(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                let mut acc = T::zero();
                for (c, x) in v.iter().enumerate() {
                    let a = &self[(r, c)];
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc + a.clone() * x;
                    }
                }
                acc
            })
            .collect())
    }

    pub fn pow(&self, k: u32) -> Result<Self, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let mut acc = Self::identity(self.rows);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = T::one() / &m[(row, col)];
            for c in col..m.cols {
                let v = std::mem::replace(&mut m[(row, c)], T::zero());
                m[(row, c)] = v * &inv;
            }
            for r in 0..m.rows {
                if r == row || m[(r, col)].is_zero() {
                    continue;
                }
                let f = m[(r, col)].clone();
                for c in col..m.cols {
                    if m[(row, c)].is_zero() {
                        continue;
                    }
                    let delta = f.clone() * &m[(row, c)];
                    let v = std::mem::replace(&mut m[(r, c)], T::zero());
                    m[(r, c)] = v - delta;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space `{x : Mx = 0}`, one vector per free column.
    pub fn kernel_vectors(&self) -> Vec<Vec<T>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![T::zero(); self.cols];
            v[free] = T::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r[(i, free)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Some `x` with `Mx = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[T]) -> Result<Option<Vec<T>>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::Shape(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, self.cols)] = b[r].clone();
        }
        let (red, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![T::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = red[(i, self.cols)].clone();
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Result<Self, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, n + r)] = T::one();
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || (n > 0 && pivots[n - 1] != n - 1) {
            return Err(LinalgError::Singular);
        }
        let mut inv = Self::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv[(r, c)] = red[(r, n + c)].clone();
            }
        }
        Ok(inv)
    }

    /// Smallest `k` with `M^k = 0`, if `M` is nilpotent.
    pub fn nilpotency_index(&self) -> Option<u32> {
        if !self.is_square() {
            return None;
        }
        let mut acc = Self::identity(self.rows);
        for k in 0..=self.rows as u32 {
            if acc.is_zero() {
                return Some(k);
            }
            acc = acc.mul(self).ok()?;
        }
        None
    }

    /// `exp(M)` for a nilpotent `M`, as a finite sum.
    pub fn exp_nilpotent(&self) -> Result<Self, LinalgError> {
        let k = self.nilpotency_index().ok_or(LinalgError::NotNilpotent)?;
        let mut acc = Self::identity(self.rows);
        let mut term = Self::identity(self.rows);
        for j in 1..k {
            term = term.mul(self)?;
            let denom = T::from_rational(Rational::from_integer(j.into()));
            term = term.map(|x| x.clone() / &denom);
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square() && *self == self.adjoint()
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, o: &Self) -> Self {
        let mut m = Self::zeros(self.rows + o.rows, self.cols + o.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m[(r, c)] = self[(r, c)].clone();
            }
        }
        for r in 0..o.rows {
            for c in 0..o.cols {
                m[(self.rows + r, self.cols + c)] = o[(r, c)].clone();
            }
        }
        m
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn same_shape(&self, o: &Self) -> Result<(), LinalgError> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(LinalgError::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(())
    }
}

impl RatMatrix {
    /// Embeds a rational matrix into ℚ(i).
    pub fn to_gauss(&self) -> GaussMatrix {
        self.map(|x| GaussRational::real(x.clone()))
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count");
        Matrix {
            rows,
            cols,
            data: entries.iter().map(|&x| super::rat(x)).collect(),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }
}

impl GaussMatrix {
    pub fn is_real(&self) -> bool {
        self.data.iter().all(GaussRational::is_real)
    }

    /// Real part, when every entry is real.
    pub fn to_rational(&self) -> Option<RatMatrix> {
        if !self.is_real() {
            return None;
        }
        Some(self.map(|x| x.re.clone()))
    }
}

/// Dot product `Σ aᵢbᵢ` (no conjugation).
pub fn dot<T: Field>(a: &[T], b: &[T]) -> T {
    let mut acc = T::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = acc + x.clone() * y;
        }
    }
    acc
}

pub fn vec_add<T: Field>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y).collect()
}

pub fn vec_sub<T: Field>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y).collect()
}

pub fn vec_scale<T: Field>(a: &[T], s: &T) -> Vec<T> {
    a.iter().map(|x| x.clone() * s).collect()
}

pub fn vec_conj<T: Field>(a: &[T]) -> Vec<T> {
    a.iter().map(Field::conj).collect()
}

pub fn to_gauss_vec(v: &[Rational]) -> Vec<GaussRational> {
    v.iter().map(|x| GaussRational::real(x.clone())).collect()
}

pub fn unit_vector<T: Field>(dim: usize, i: usize) -> Vec<T> {
    let mut v = vec![T::zero(); dim];
    v[i] = T::one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, ratio};

    #[test]
    fn solve_by_cramer() {
        let m = RatMatrix::from_i64(2, 2, &[1, 2, 3, 4]);
        let x = m.solve(&[rat(5), rat(6)]).unwrap().unwrap();
        assert_eq!(x, vec![rat(-4), ratio(9, 2)]);
    }

    #[test]
    fn solve_identity_returns_rhs() {
        let m = RatMatrix::identity(3);
        let b = vec![rat(1), ratio(-2, 7), rat(0)];
        assert_eq!(m.solve(&b).unwrap().unwrap(), b);
    }

    #[test]
    fn solve_inconsistent() {
        let m = RatMatrix::zeros(2, 2);
        assert_eq!(m.solve(&[rat(1), rat(0)]).unwrap(), None);
    }

    #[test]
    fn solve_shape_mismatch() {
        let m = RatMatrix::zeros(2, 2);
        assert!(m.solve(&[rat(1)]).is_err());
    }

    #[test]
    fn empty_system() {
        let m = RatMatrix::zeros(0, 0);
        assert_eq!(m.solve(&[]).unwrap(), Some(vec![]));
        assert!(m.kernel_vectors().is_empty());
        assert_eq!(m.inverse().unwrap(), RatMatrix::zeros(0, 0));
    }

    #[test]
    fn inverse_and_exp() {
        let m = RatMatrix::from_i64(2, 2, &[2, 1, 1, 1]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), RatMatrix::identity(2));
        let n = RatMatrix::from_i64(3, 3, &[0, 1, 0, 0, 0, 1, 0, 0, 0]);
        assert_eq!(n.nilpotency_index(), Some(3));
        let e = n.exp_nilpotent().unwrap();
        assert_eq!(e[(0, 2)], ratio(1, 2));
        assert!(RatMatrix::identity(2).exp_nilpotent().is_err());
    }
}
