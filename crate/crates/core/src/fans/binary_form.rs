use num_traits::Signed;

use super::FanError;
use crate::linalg::{is_positive_definite_real, rat, ratio, RatMatrix, Rational};

/// A cone in `Sym(m)` coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymCone {
    pub m: usize,
    pub generators: Vec<RatMatrix>,
}

impl SymCone {
    pub fn new(m: usize, generators: Vec<RatMatrix>) -> Result<Self, FanError> {
        if generators.iter().any(|g| g.rows() != m || !g.is_symmetric()) {
            return Err(FanError::NotSymmetric);
        }
        Ok(SymCone { m, generators })
    }

    /// `σ₀ = cone(diag(1,0), diag(0,1), [[1,−1],[−1,1]])`.
    pub fn sigma0() -> Self {
        SymCone {
            m: 2,
            generators: vec![
                RatMatrix::from_i64(2, 2, &[1, 0, 0, 0]),
                RatMatrix::from_i64(2, 2, &[0, 0, 0, 1]),
                RatMatrix::from_i64(2, 2, &[1, -1, -1, 1]),
            ],
        }
    }

    /// `X ↦ g X gᵀ` on every generator.
    pub fn act(&self, g: &RatMatrix) -> Self {
        let gt = g.transpose();
        SymCone {
            m: self.m,
            generators: self
                .generators
                .iter()
                .map(|x| g.mul(x).and_then(|y| y.mul(&gt)).expect("size"))
                .collect(),
        }
    }
}

/// Reduction certificate: `γ X γᵀ = X₀ = a·diag(1,0) + b·diag(0,1) + c·[[1,−1],[−1,1]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub gamma: RatMatrix,
    pub reduced: RatMatrix,
    /// `(a, b, c)`, all nonnegative.
    pub coords: (Rational, Rational, Rational),
    pub steps: usize,
}

/// `σ₀` coordinates of a symmetric 2×2 matrix.
pub fn sigma0_coords(x: &RatMatrix) -> (Rational, Rational, Rational) {
    let (a, b, c) = (&x[(0, 0)], &x[(0, 1)], &x[(1, 1)]);
    (a + b, c + b, -b.clone())
}

/// Lagrange–Gauss reduction of a positive definite binary form followed by
/// an off-diagonal sign flip, landing in `σ₀`.
pub fn reduce_binary_form(x: &RatMatrix) -> Result<Reduction, FanError> {
    if x.rows() != 2 || x.cols() != 2 || !x.is_symmetric() {
        return Err(FanError::NotSymmetric);
    }
    if !is_positive_definite_real(x)? {
        return Err(FanError::NotPositiveDefinite);
    }
    let mut cur = x.clone();
    let mut gamma = RatMatrix::identity(2);
    let mut steps = 0;
    let apply = |g: &RatMatrix, cur: &mut RatMatrix, gamma: &mut RatMatrix| {
        *cur = g.mul(cur).and_then(|y| y.mul(&g.transpose())).expect("2x2");
        *gamma = g.mul(gamma).expect("2x2");
    };
    loop {
        let a = cur[(0, 0)].clone();
        let b = cur[(0, 1)].clone();
        if (&b + &b).abs() > a {
            // k = nearest integer to b/a.
            let k = (&b / &a + ratio(1, 2)).floor();
            let mut t = RatMatrix::identity(2);
            t[(1, 0)] = -k;
            apply(&t, &mut cur, &mut gamma);
            steps += 1;
        }
        if cur[(0, 0)] > cur[(1, 1)] {
            let s = RatMatrix::from_i64(2, 2, &[0, 1, 1, 0]);
            apply(&s, &mut cur, &mut gamma);
            steps += 1;
            continue;
        }
        break;
    }
    if cur[(0, 1)].is_positive() {
        let r = RatMatrix::from_i64(2, 2, &[1, 0, 0, -1]);
        apply(&r, &mut cur, &mut gamma);
        steps += 1;
    }
    let coords = sigma0_coords(&cur);
    debug_assert!(!coords.0.is_negative() && !coords.1.is_negative() && !coords.2.is_negative());
    Ok(Reduction {
        gamma,
        reduced: cur,
        coords,
        steps,
    })
}

/// `|det γ| = 1` and integral.
pub fn is_unimodular(g: &RatMatrix) -> bool {
    if g.rows() != 2 || g.cols() != 2 || !g.is_integral() {
        return false;
    }
    let det = &g[(0, 0)] * &g[(1, 1)] - &g[(0, 1)] * &g[(1, 0)];
    det.abs() == rat(1)
}

/// Whether `X₀` lies in `σ₀`.
pub fn in_sigma0(x: &RatMatrix) -> bool {
    let (a, b, c) = sigma0_coords(x);
    x.is_symmetric() && !a.is_negative() && !b.is_negative() && !c.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let r = reduce_binary_form(&RatMatrix::from_i64(2, 2, &[2, 1, 1, 2])).unwrap();
        assert_eq!(r.gamma, RatMatrix::from_i64(2, 2, &[1, 0, 0, -1]));
        assert_eq!(r.reduced, RatMatrix::from_i64(2, 2, &[2, -1, -1, 2]));
        assert_eq!(r.coords, (rat(1), rat(1), rat(1)));
        let r = reduce_binary_form(&RatMatrix::from_i64(2, 2, &[1, 0, 0, 5])).unwrap();
        assert_eq!(r.gamma, RatMatrix::identity(2));
        assert_eq!(r.coords, (rat(1), rat(5), rat(0)));
        let r = reduce_binary_form(&RatMatrix::identity(2)).unwrap();
        assert_eq!(r.gamma, RatMatrix::identity(2));
    }

    #[test]
    fn long_reduction() {
        let x = RatMatrix::from_i64(2, 2, &[13, 31, 31, 74]);
        let r = reduce_binary_form(&x).unwrap();
        let gt = r.gamma.transpose();
        assert_eq!(r.gamma.mul(&x).unwrap().mul(&gt).unwrap(), r.reduced);
        assert!(is_unimodular(&r.gamma));
        assert!(in_sigma0(&r.reduced));
    }

    #[test]
    fn rejects_indefinite() {
        assert_eq!(
            reduce_binary_form(&RatMatrix::from_i64(2, 2, &[1, 2, 2, 1])),
            Err(FanError::NotPositiveDefinite)
        );
        assert_eq!(
            reduce_binary_form(&RatMatrix::from_i64(2, 2, &[1, 2, 0, 1])),
            Err(FanError::NotSymmetric)
        );
    }
}
