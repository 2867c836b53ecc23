//! The lattice `H = ℤ^{2n}` with its standard symplectic form, the Lie algebra
//! `sp(n)`, isotropic subspaces `S`, the abelian subalgebra `η(S)` and its
//! positivity cone `η⁺(S)`.
//!
//! Conventions: `Q(v, w) = vᵀ J w` with `J = [[0, I], [−I, 0]]`, so that
//! `Q(e_j, e_{n+j}) = 1`. For an isotropic `S` with lattice basis
//! `s_1, …, s_m` of `S ∩ ℤ^{2n}` (see [`saturated_basis`]), a symmetric `m × m` matrix `X` corresponds to
//! `N_X(v) = Σ X_ij Q(v, s_i) s_j`, and `Q(v, N_X w) = ℓ(v)ᵀ X ℓ(w)` where
//! `ℓ(v) = (Q(v, s_i))_i`. Hence `N_X ∈ η⁺(S)` iff `X` is positive definite.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{
    is_positive_definite_real, saturated_basis, solve_integral, unit_vector, vec_scale, vec_sub,
    Field, LinalgError, RatMatrix, RatSubspace, Rational, Subspace,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymplecticError {
    #[error("matrix has size {found}, expected {expected}")]
    Size { expected: usize, found: usize },
    #[error("matrix is not in sp(n): Q(Nv,w) + Q(v,Nw) != 0")]
    NotInLieAlgebra,
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("matrix does not preserve Q")]
    NotSymplectic,
    #[error("matrix is not integral")]
    NotIntegral,
    #[error("subspace is not isotropic")]
    NotIsotropic,
    #[error("image of N is not contained in S")]
    ImageNotInS,
    #[error("vectors do not span a complement of S^⊥")]
    BadComplement,
    #[error("restriction of Q is degenerate")]
    Degenerate,
    #[error("Sym(m) coordinates need a symmetric {0}x{0} matrix")]
    BadSymmetric(usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A hyperbolic pair `(u, w)` with `Q(u, w) = 1`.
pub type Pair<T> = (Vec<T>, Vec<T>);

/// `(ℚ^{2n}, Q)` with the standard symplectic form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SymplecticSpace {
    n: usize,
}

impl SymplecticSpace {
    pub fn new(n: usize) -> Self {
        SymplecticSpace { n }
    }

    /// Half rank.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    /// Gram matrix `[[0, I], [−I, 0]]`.
    pub fn gram(&self) -> RatMatrix {
        let n = self.n;
        let mut j = RatMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            j[(i, n + i)] = Rational::one();
            j[(n + i, i)] = -Rational::one();
        }
        j
    }

    /// `Q(v, w)`, bilinear in both arguments.
    pub fn q<T: Field>(&self, v: &[T], w: &[T]) -> T {
        let n = self.n;
        let mut acc = T::zero();
        for j in 0..n {
            if !v[j].is_zero() && !w[n + j].is_zero() {
                acc = acc + v[j].clone() * &w[n + j];
            }
            if !v[n + j].is_zero() && !w[j].is_zero() {
                acc = acc - v[n + j].clone() * &w[j];
            }
        }
        acc
    }

    /// The covector `v ↦ Q(v, w)` written as a row.
    pub fn q_row<T: Field>(&self, w: &[T]) -> Vec<T> {
        let n = self.n;
        let mut r = Vec::with_capacity(2 * n);
        r.extend(w[n..].iter().cloned());
        r.extend(w[..n].iter().map(|x| -x.clone()));
        r
    }

    /// `{v : Q(v, w) = 0 for all w ∈ sub}`.
    pub fn perp<T: Field>(&self, sub: &Subspace<T>) -> Subspace<T> {
        if sub.is_zero() {
            return Subspace::full(self.dim());
        }
        let rows: Vec<Vec<T>> = sub.basis().iter().map(|w| self.q_row(w)).collect();
        let m = crate::linalg::Matrix::from_rows(self.dim(), &rows).expect("row length");
        Subspace::kernel_of(&m)
    }

    /// `Q(A, B) = 0`.
    pub fn q_vanishes<T: Field>(&self, a: &Subspace<T>, b: &Subspace<T>) -> bool {
        a.basis()
            .iter()
            .all(|v| b.basis().iter().all(|w| self.q(v, w).is_zero()))
    }

    fn check_size<T: Field>(&self, m: &crate::linalg::Matrix<T>) -> Result<(), SymplecticError> {
        if m.rows() != self.dim() || m.cols() != self.dim() {
            return Err(SymplecticError::Size {
                expected: self.dim(),
                found: m.rows().max(m.cols()),
            });
        }
        Ok(())
    }

    /// `Nᵀ J + J N = 0`.
    pub fn is_in_lie_algebra(&self, m: &RatMatrix) -> bool {
        if self.check_size(m).is_err() {
            return false;
        }
        let j = self.gram();
        let lhs = m.transpose().mul(&j).expect("size");
        let rhs = j.mul(m).expect("size");
        lhs.add(&rhs).expect("size").is_zero()
    }

    /// `γᵀ J γ = J`.
    pub fn is_symplectic(&self, m: &RatMatrix) -> bool {
        if self.check_size(m).is_err() {
            return false;
        }
        let j = self.gram();
        m.transpose().mul(&j).and_then(|x| x.mul(m)).ok() == Some(j)
    }

    /// Validates `γ ∈ Sp(n, ℤ)`.
    pub fn check_integral_symplectic(&self, m: &RatMatrix) -> Result<(), SymplecticError> {
        self.check_size(m)?;
        if !m.is_integral() {
            return Err(SymplecticError::NotIntegral);
        }
        if !self.is_symplectic(m) {
            return Err(SymplecticError::NotSymplectic);
        }
        Ok(())
    }

    /// `γ⁻¹ = −J γᵀ J` for symplectic `γ`.
    pub fn symplectic_inverse(&self, g: &RatMatrix) -> RatMatrix {
        let j = self.gram();
        j.mul(&g.transpose())
            .and_then(|x| x.mul(&j))
            .expect("size")
            .neg()
    }

    /// `diag(A, A^{-T})` for invertible `A`.
    pub fn levi(&self, a: &RatMatrix) -> Result<RatMatrix, SymplecticError> {
        if a.rows() != self.n || a.cols() != self.n {
            return Err(SymplecticError::Size {
                expected: self.n,
                found: a.rows().max(a.cols()),
            });
        }
        let d = a.inverse()?.transpose();
        Ok(a.direct_sum(&d))
    }

    /// `[[I, B], [0, I]]` for symmetric `B`.
    pub fn upper_unipotent(&self, b: &RatMatrix) -> Result<RatMatrix, SymplecticError> {
        self.unipotent(b, true)
    }

    /// `[[I, 0], [B, I]]` for symmetric `B`.
    pub fn lower_unipotent(&self, b: &RatMatrix) -> Result<RatMatrix, SymplecticError> {
        self.unipotent(b, false)
    }

    fn unipotent(&self, b: &RatMatrix, upper: bool) -> Result<RatMatrix, SymplecticError> {
        let n = self.n;
        if b.rows() != n || !b.is_symmetric() {
            return Err(SymplecticError::BadSymmetric(n));
        }
        let mut m = RatMatrix::identity(2 * n);
        for i in 0..n {
            for j in 0..n {
                if upper {
                    m[(i, n + j)] = b[(i, j)].clone();
                } else {
                    m[(n + i, j)] = b[(i, j)].clone();
                }
            }
        }
        Ok(m)
    }

    /// Symplectic Gram–Schmidt on vectors spanning a subspace on which `Q` is
    /// nondegenerate. Returns pairs `(u_k, w_k)` with `Q(u_k, w_k) = 1` and all
    /// other pairings zero.
    pub fn symplectic_gram_schmidt<T: Field>(
        &self,
        vectors: &[Vec<T>],
    ) -> Result<Vec<Pair<T>>, SymplecticError> {
        let mut pool: Vec<Vec<T>> = vectors.to_vec();
        let mut pairs = Vec::new();
        while let Some(x) = pool.first().cloned() {
            let Some(k) = (1..pool.len()).find(|&k| !self.q(&x, &pool[k]).is_zero()) else {
                return Err(SymplecticError::Degenerate);
            };
            let qxy = self.q(&x, &pool[k]);
            let y = vec_scale(&pool[k], &(T::one() / &qxy));
            pool.remove(k);
            pool.remove(0);
            for v in pool.iter_mut() {
                let a = self.q(v, &y);
                let b = self.q(v, &x);
                let mut nv = vec_sub(v, &vec_scale(&x, &a));
                nv = crate::linalg::vec_add(&nv, &vec_scale(&y, &b));
                *v = nv;
            }
            pairs.push((x, y));
        }
        Ok(pairs)
    }
}

/// A rational element of `sp(n)` that is nilpotent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Nilpotent {
    space: SymplecticSpace,
    matrix: RatMatrix,
}

impl Nilpotent {
    pub fn new(space: SymplecticSpace, matrix: RatMatrix) -> Result<Self, SymplecticError> {
        space.check_size(&matrix)?;
        if !space.is_in_lie_algebra(&matrix) {
            return Err(SymplecticError::NotInLieAlgebra);
        }
        if matrix.nilpotency_index().is_none() {
            return Err(SymplecticError::NotNilpotent);
        }
        Ok(Nilpotent { space, matrix })
    }

    pub fn zero(space: SymplecticSpace) -> Self {
        Nilpotent {
            space,
            matrix: RatMatrix::zeros(space.dim(), space.dim()),
        }
    }

    pub fn space(&self) -> SymplecticSpace {
        self.space
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// Smallest `k` with `N^k = 0`.
    pub fn nilpotency_index(&self) -> u32 {
        self.matrix.nilpotency_index().expect("checked at construction")
    }

    pub fn is_square_zero(&self) -> bool {
        self.nilpotency_index() <= 2
    }

    pub fn image(&self) -> RatSubspace {
        Subspace::column_space(&self.matrix)
    }

    pub fn kernel(&self) -> RatSubspace {
        Subspace::kernel_of(&self.matrix)
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn neg(&self) -> Self {
        Nilpotent {
            space: self.space,
            matrix: self.matrix.neg(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Nilpotent {
            space: self.space,
            matrix: self.matrix.scale(c),
        }
    }

    /// Sum of commuting nilpotents; fails if the sum is not nilpotent.
    pub fn sum(space: SymplecticSpace, items: &[Nilpotent]) -> Result<Self, SymplecticError> {
        let mut acc = RatMatrix::zeros(space.dim(), space.dim());
        for n in items {
            acc = acc.add(&n.matrix)?;
        }
        Nilpotent::new(space, acc)
    }

    /// `Ad(γ)N = γ N γ⁻¹` for symplectic `γ`.
    pub fn conjugate(&self, gamma: &RatMatrix) -> Result<Self, SymplecticError> {
        if !self.space.is_symplectic(gamma) {
            return Err(SymplecticError::NotSymplectic);
        }
        let inv = self.space.symplectic_inverse(gamma);
        let m = gamma.mul(&self.matrix)?.mul(&inv)?;
        Ok(Nilpotent {
            space: self.space,
            matrix: m,
        })
    }
}

/// A rational subspace on which `Q` vanishes identically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IsotropicSubspace {
    space: SymplecticSpace,
    sub: RatSubspace,
    lattice: Vec<Vec<Rational>>,
}

impl IsotropicSubspace {
    pub fn new(space: SymplecticSpace, sub: RatSubspace) -> Result<Self, SymplecticError> {
        if sub.ambient_dim() != space.dim() {
            return Err(LinalgError::AmbientMismatch(sub.ambient_dim(), space.dim()).into());
        }
        if !space.q_vanishes(&sub, &sub) {
            return Err(SymplecticError::NotIsotropic);
        }
        let lattice = saturated_basis(&sub);
        Ok(IsotropicSubspace { space, sub, lattice })
    }

    pub fn span(space: SymplecticSpace, vectors: &[Vec<Rational>]) -> Result<Self, SymplecticError> {
        Self::new(space, Subspace::span(space.dim(), vectors)?)
    }

    /// `span{e_{2n−m+1}, …, e_{2n}}`, the last `m` vectors of the second block.
    pub fn standard(space: SymplecticSpace, m: usize) -> Self {
        let d = space.dim();
        let vs: Vec<Vec<Rational>> = (d - m..d).map(|i| unit_vector(d, i)).collect();
        Self::span(space, &vs).expect("coordinate subspace is isotropic")
    }

    pub fn space(&self) -> SymplecticSpace {
        self.space
    }

    pub fn subspace(&self) -> &RatSubspace {
        &self.sub
    }

    /// The `ℤ`-basis of `S ∩ ℤ^{2n}` used for `Sym(m)` coordinates.
    pub fn lattice_basis(&self) -> &[Vec<Rational>] {
        &self.lattice
    }

    pub fn dim(&self) -> usize {
        self.sub.dim()
    }

    /// `γS`.
    pub fn transform(&self, gamma: &RatMatrix) -> Result<Self, SymplecticError> {
        if !self.space.is_symplectic(gamma) {
            return Err(SymplecticError::NotSymplectic);
        }
        Self::new(self.space, self.sub.image_under(gamma)?)
    }

    /// Symplectic basis adapted to `S`: the columns of the returned matrix `P`
    /// satisfy `Q(P_k, P_{n+k}) = 1`, all other pairings vanish, and the last
    /// `m` columns are [`Self::lattice_basis`]. `P` is integral, so `P ∈ Sp(n, ℤ)`.
    pub fn adapted_basis(&self) -> Result<RatMatrix, SymplecticError> {
        let p = self.adapted_basis_over_q()?;
        if p.is_integral() {
            return Ok(p);
        }
        self.adapted_basis_over_z()
    }

    fn dual_pairs(&self, a: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
        let sp = self.space;
        let s = &self.lattice;
        let m = s.len();
        (0..m)
            .map(|i| {
                let mut v = a[i].clone();
                for j in (i + 1)..m {
                    let c = sp.q(&a[i], &a[j]);
                    if !c.is_zero() {
                        v = crate::linalg::vec_add(&v, &vec_scale(&s[j], &c));
                    }
                }
                v
            })
            .collect()
    }

    fn assemble(&self, fixed: &[Vec<Rational>], pairs: Vec<Pair<Rational>>) -> Result<RatMatrix, SymplecticError> {
        let (n, m, d) = (self.space.n(), self.dim(), self.space.dim());
        let mut cols = vec![Vec::new(); d];
        for (k, (u, w)) in pairs.into_iter().enumerate() {
            cols[k] = u;
            cols[n + k] = w;
        }
        for i in 0..m {
            cols[n - m + i] = fixed[i].clone();
            cols[2 * n - m + i] = self.lattice[i].clone();
        }
        Ok(RatMatrix::from_columns(d, &cols)?)
    }

    fn adapted_basis_over_q(&self) -> Result<RatMatrix, SymplecticError> {
        let sp = self.space;
        let (m, d) = (self.dim(), sp.dim());
        let s = &self.lattice;
        // Dual vectors a_i with Q(a_i, s_j) = δ_ij.
        let rows: Vec<Vec<Rational>> = s.iter().map(|sj| sp.q_row(sj)).collect();
        let sys = RatMatrix::from_rows(d, &rows)?;
        let mut a: Vec<Vec<Rational>> = Vec::with_capacity(m);
        for i in 0..m {
            let x = sys
                .solve(&unit_vector(m, i))?
                .ok_or(SymplecticError::Degenerate)?;
            a.push(x);
        }
        let fixed = self.dual_pairs(a);
        let mut both = fixed.clone();
        both.extend(s.iter().cloned());
        let rest = sp.perp(&Subspace::span(d, &both)?);
        let pairs = sp.symplectic_gram_schmidt(rest.basis())?;
        self.assemble(&fixed, pairs)
    }

    /// Same construction with integral duals and a symplectic `ℤ`-basis of the
    /// unimodular complement, splitting off one hyperbolic pair at a time.
    fn adapted_basis_over_z(&self) -> Result<RatMatrix, SymplecticError> {
        let sp = self.space;
        let (m, d) = (self.dim(), sp.dim());
        let s = &self.lattice;
        let rows: Vec<Vec<Rational>> = s.iter().map(|sj| sp.q_row(sj)).collect();
        let mut a = Vec::with_capacity(m);
        for i in 0..m {
            a.push(solve_integral(&rows, &unit_vector(m, i), d).ok_or(SymplecticError::Degenerate)?);
        }
        let fixed = self.dual_pairs(a);
        let mut both = fixed.clone();
        both.extend(s.iter().cloned());
        let mut rest = sp.perp(&Subspace::span(d, &both)?);
        let mut pairs = Vec::new();
        while !rest.is_zero() {
            let lat = saturated_basis(&rest);
            let x = lat[0].clone();
            let row: Vec<Rational> = lat.iter().map(|b| sp.q(&x, b)).collect();
            let c = solve_integral(&[row], &[Rational::one()], lat.len())
                .ok_or(SymplecticError::Degenerate)?;
            let mut y = vec![Rational::zero(); d];
            for (ck, b) in c.iter().zip(&lat) {
                y = crate::linalg::vec_add(&y, &vec_scale(b, ck));
            }
            let pair = Subspace::span(d, &[x.clone(), y.clone()])?;
            rest = rest.intersect(&sp.perp(&pair))?;
            pairs.push((x, y));
        }
        self.assemble(&fixed, pairs)
    }
}

/// `S^⊥ = {v : Q(v, S) = 0}`.
pub fn q_perp(s: &IsotropicSubspace) -> RatSubspace {
    s.space.perp(&s.sub)
}

/// The element `N_X` of `η(S)` attached to a symmetric `X` in the echelon
/// basis of `S`.
pub fn sym_to_eta(s: &IsotropicSubspace, x: &RatMatrix) -> Result<Nilpotent, SymplecticError> {
    let m = s.dim();
    if x.rows() != m || !x.is_symmetric() {
        return Err(SymplecticError::BadSymmetric(m));
    }
    let sp = s.space;
    let d = sp.dim();
    let basis = &s.lattice;
    let mut mat = RatMatrix::zeros(d, d);
    // Column k of N_X is Σ_ij X_ij Q(e_k, s_i) s_j.
    for k in 0..d {
        let ek: Vec<Rational> = unit_vector(d, k);
        let l: Vec<Rational> = basis.iter().map(|si| sp.q(&ek, si)).collect();
        for i in 0..m {
            if l[i].is_zero() {
                continue;
            }
            for j in 0..m {
                let c = &x[(i, j)] * &l[i];
                if c.is_zero() {
                    continue;
                }
                for r in 0..d {
                    if !basis[j][r].is_zero() {
                        let v = mat[(r, k)].clone() + &c * &basis[j][r];
                        mat[(r, k)] = v;
                    }
                }
            }
        }
    }
    Nilpotent::new(sp, mat)
}

/// Inverse of [`sym_to_eta`]: the symmetric matrix `X` with `N = N_X`, or
/// `None` when `N ∉ η(S)`.
pub fn eta_to_sym(s: &IsotropicSubspace, n: &Nilpotent) -> Result<Option<RatMatrix>, SymplecticError> {
    if !s.sub.contains(&n.image()) || !n.space.is_in_lie_algebra(&n.matrix) {
        return Ok(None);
    }
    let sp = s.space;
    let m = s.dim();
    let rows: Vec<Vec<Rational>> = s.lattice.iter().map(|si| sp.q_row(si)).collect();
    let sys = RatMatrix::from_rows(sp.dim(), &rows)?;
    let mut dual = Vec::with_capacity(m);
    for a in 0..m {
        dual.push(
            sys.solve(&unit_vector(m, a))?
                .ok_or(SymplecticError::Degenerate)?,
        );
    }
    let mut x = RatMatrix::zeros(m, m);
    for a in 0..m {
        for b in 0..m {
            let nb = n.matrix.mul_vec(&dual[b])?;
            x[(a, b)] = sp.q(&dual[a], &nb);
        }
    }
    let candidate = sym_to_eta(s, &x)?;
    Ok((candidate.matrix == n.matrix).then_some(x))
}

/// A rational basis of `η(S) = {N ∈ sp : Im N ⊆ S}`, indexed by `(i, j)` with
/// `i ≤ j` in lexicographic order: `E_ii` and `E_ij + E_ji`.
pub fn eta_basis(s: &IsotropicSubspace) -> Vec<Nilpotent> {
    let m = s.dim();
    let mut out = Vec::with_capacity(m * (m + 1) / 2);
    for i in 0..m {
        for j in i..m {
            let mut x = RatMatrix::zeros(m, m);
            x[(i, j)] = Rational::one();
            x[(j, i)] = Rational::one();
            out.push(sym_to_eta(s, &x).expect("symmetric unit matrix"));
        }
    }
    out
}

/// Gram matrix of `Q(•, N•)` on the fixed complement of `S^⊥` obtained by
/// greedily extending the echelon basis of `S^⊥` with standard basis vectors.
pub fn phi_form(n: &Nilpotent, s: &IsotropicSubspace) -> Result<RatMatrix, SymplecticError> {
    let perp = q_perp(s);
    let d = s.space.dim();
    let complement: Vec<Vec<Rational>> = perp
        .complement_indices()
        .into_iter()
        .map(|i| unit_vector(d, i))
        .collect();
    phi_form_on(n, s, &complement)
}

/// Gram matrix of `Q(•, N•)` on an explicitly chosen complement of `S^⊥`.
pub fn phi_form_on(
    n: &Nilpotent,
    s: &IsotropicSubspace,
    complement: &[Vec<Rational>],
) -> Result<RatMatrix, SymplecticError> {
    if !s.sub.contains(&n.image()) {
        return Err(SymplecticError::ImageNotInS);
    }
    let perp = q_perp(s);
    let d = s.space.dim();
    let c = Subspace::span(d, complement)?;
    if complement.len() != s.dim()
        || c.dim() != s.dim()
        || !perp.intersect(&c)?.is_zero()
    {
        return Err(SymplecticError::BadComplement);
    }
    let images = complement
        .iter()
        .map(|v| n.matrix.mul_vec(v))
        .collect::<Result<Vec<_>, _>>()?;
    let k = complement.len();
    let mut g = RatMatrix::zeros(k, k);
    for a in 0..k {
        for b in 0..k {
            g[(a, b)] = s.space.q(&complement[a], &images[b]);
        }
    }
    Ok(g)
}

/// `N ∈ η⁺(S)`: the form `Q(•, N•)` is positive definite on `H/S^⊥`.
pub fn in_eta_plus(n: &Nilpotent, s: &IsotropicSubspace) -> Result<bool, SymplecticError> {
    Ok(is_positive_definite_real(&phi_form(n, s)?)?)
}

/// `Im N` as an isotropic subspace (valid whenever `N² = 0`).
pub fn image_subspace(n: &Nilpotent) -> Result<IsotropicSubspace, SymplecticError> {
    IsotropicSubspace::new(n.space, n.image())
}

/// Convenience: integer matrix as a nilpotent of `sp(n)`.
pub fn nilpotent_from_i64(n: usize, entries: &[i64]) -> Result<Nilpotent, SymplecticError> {
    let d = 2 * n;
    Nilpotent::new(SymplecticSpace::new(n), RatMatrix::from_i64(d, d, entries))
}

/// Unit vector `e_i` (0-based) of `ℚ^{2n}`.
pub fn basis_vector(space: SymplecticSpace, i: usize) -> Vec<Rational> {
    unit_vector(space.dim(), i)
}
