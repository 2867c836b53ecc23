use serde::Serialize;

use super::CasebookError;
use crate::hodge::HodgeNumbers;
use crate::linalg::{format_rational, ratio, Rational};

/// Parameters of a boundary component: `dim S = m`, the cone dimension and
/// the Hodge numbers `h'` of the graded domain `D'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimBoundInput {
    pub n: usize,
    pub m: usize,
    pub dim_sigma: usize,
    pub h_prime: HodgeNumbers,
    /// Ambient Hodge numbers. When absent the equality flag is read off `h'`.
    pub hodge: Option<HodgeNumbers>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimBound {
    #[serde(serialize_with = "ser_rational")]
    pub bound: Rational,
    pub is_equality_case: bool,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

fn half(x: i64) -> Rational {
    ratio(x, 2)
}

/// `½k(k+1) + mk + ½m(m+1) − dim σ + ½(k² − Σ_{p≥0} (h'^{p,−p−1})²)` with
/// `k = n − m`. Equality holds when the Hodge structure has level at most 3.
pub fn dim_bound(input: &DimBoundInput) -> Result<DimBound, CasebookError> {
    let (n, m) = (input.n, input.m);
    if m > n {
        return Err(CasebookError::InvalidInput(format!("m = {m} exceeds n = {n}")));
    }
    let k = (n - m) as i64;
    if input.h_prime.total() as i64 != 2 * k {
        return Err(CasebookError::InvalidInput(format!(
            "h' sums to {}, expected 2(n - m) = {}",
            input.h_prime.total(),
            2 * k
        )));
    }
    if let Some(h) = &input.hodge {
        if h.total() != 2 * n {
            return Err(CasebookError::InvalidInput(format!(
                "h sums to {}, expected 2n = {}",
                h.total(),
                2 * n
            )));
        }
    }
    let m = m as i64;
    let sq: i64 = input
        .h_prime
        .entries()
        .range(0..)
        .map(|(_, &v)| (v * v) as i64)
        .sum();
    let bound = half(k * (k + 1)) + Rational::from_integer((m * k).into()) + half(m * (m + 1))
        - Rational::from_integer((input.dim_sigma as i64).into())
        + half(k * k - sq);
    let level_three = |h: &HodgeNumbers| h.entries().range(2..).all(|(_, v)| *v == 0);
    let is_equality_case = match &input.hodge {
        Some(h) => level_three(h),
        None => level_three(&input.h_prime),
    };
    Ok(DimBound {
        bound,
        is_equality_case,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn input(n: usize, m: usize, dim_sigma: usize, hp: &[(i32, usize)]) -> DimBoundInput {
        DimBoundInput {
            n,
            m,
            dim_sigma,
            h_prime: HodgeNumbers::from_pairs(hp).unwrap(),
            hodge: None,
        }
    }

    #[test]
    fn type_one_data() {
        let mut i = input(2, 1, 1, &[(1, 1), (-2, 1)]);
        i.hodge = Some(HodgeNumbers::weil_1111());
        let b = dim_bound(&i).unwrap();
        assert_eq!(b.bound, rat(2));
        assert!(b.is_equality_case);
    }

    #[test]
    fn siegel_space_matches_toroidal_count() {
        // For D = H, the last summand vanishes: ½k(k+1) + mk + ½m(m+1) − dim σ.
        for n in 1..5usize {
            for m in 1..=n {
                let k = n - m;
                let hp: Vec<(i32, usize)> = if k > 0 { vec![(0, k), (-1, k)] } else { vec![] };
                let b = dim_bound(&input(n, m, 1, &hp)).unwrap();
                let tor = (k * (k + 1) / 2 + m * k + m * (m + 1) / 2) as i64 - 1;
                assert_eq!(b.bound, rat(tor));
            }
        }
    }

    #[test]
    fn top_cone_gives_zero() {
        for n in 1..5 {
            let b = dim_bound(&input(n, n, n * (n + 1) / 2, &[])).unwrap();
            assert_eq!(b.bound, rat(0));
        }
    }

    #[test]
    fn mixed_levels() {
        // h' = (1, 1, 1, 1) on p = 1, 0, −1, −2: ½(4 − 2) = 1.
        let b = dim_bound(&input(3, 1, 1, &[(1, 1), (0, 1), (-1, 1), (-2, 1)])).unwrap();
        assert_eq!(b.bound, rat(3 + 2 + 1 - 1 + 1));
        let b = dim_bound(&input(3, 1, 1, &[(2, 1), (0, 1), (-1, 1), (-3, 1)])).unwrap();
        assert!(!b.is_equality_case);
        let b = dim_bound(&input(2, 1, 2, &[(0, 1), (-1, 1)])).unwrap();
        assert_eq!(b.bound, rat(1));
    }

    #[test]
    fn invalid_inputs() {
        assert!(dim_bound(&input(1, 2, 0, &[])).is_err());
        assert!(dim_bound(&input(2, 1, 1, &[(0, 2), (-1, 2)])).is_err());
    }
}
