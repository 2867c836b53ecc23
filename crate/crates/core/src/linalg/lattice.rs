//! Integer lattices inside rational subspaces.
//!
//! Column reduction by unimodular operations gives integral kernels and
//! integral solutions of linear systems; everything is exact over `ℤ`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{RatSubspace, Rational};

type IntVec = Vec<BigInt>;

/// Scales a rational vector by the lcm of its denominators.
fn clear_denominators(v: &[Rational]) -> IntVec {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    v.iter().map(|x| x.numer() * (&l / x.denom())).collect()
}

fn to_rational(v: &[BigInt]) -> Vec<Rational> {
    v.iter().map(|x| Rational::from_integer(x.clone())).collect()
}

/// Column echelon form `H = A U` with `U` unimodular.
struct ColumnEchelon {
    h: Vec<IntVec>,
    u: Vec<IntVec>,
    /// Pivot row of each of the first `rank` columns.
    pivot_rows: Vec<usize>,
}

impl ColumnEchelon {
    fn new(a: &[IntVec], cols: usize) -> Self {
        let mut h: Vec<IntVec> = a.to_vec();
        let mut u: Vec<IntVec> = (0..cols)
            .map(|i| (0..cols).map(|j| BigInt::from((i == j) as i32)).collect())
            .collect();
        let mut pivot_rows = Vec::new();
        let mut c = 0;
        for r in 0..h.len() {
            if c == cols {
                break;
            }
            loop {
                let best = (c..cols)
                    .filter(|&j| !h[r][j].is_zero())
                    .min_by(|&x, &y| h[r][x].abs().cmp(&h[r][y].abs()));
                let Some(j) = best else { break };
                swap_columns(&mut h, &mut u, c, j);
                let mut done = true;
                for k in c + 1..cols {
                    if h[r][k].is_zero() {
                        continue;
                    }
                    let q = h[r][k].div_floor(&h[r][c]);
                    add_column(&mut h, &mut u, k, c, &(-q));
                    if !h[r][k].is_zero() {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if !h[r][c].is_zero() {
                pivot_rows.push(r);
                c += 1;
            }
        }
        ColumnEchelon { h, u, pivot_rows }
    }

    fn rank(&self) -> usize {
        self.pivot_rows.len()
    }

    fn u_column(&self, j: usize) -> IntVec {
        self.u.iter().map(|row| row[j].clone()).collect()
    }
}

fn swap_columns(h: &mut [IntVec], u: &mut [IntVec], a: usize, b: usize) {
    if a == b {
        return;
    }
    for row in h.iter_mut().chain(u.iter_mut()) {
        row.swap(a, b);
    }
}

/// Column `dst += k · column src`.
fn add_column(h: &mut [IntVec], u: &mut [IntVec], dst: usize, src: usize, k: &BigInt) {
    for row in h.iter_mut().chain(u.iter_mut()) {
        let v = &row[src] * k;
        row[dst] += v;
    }
}

/// Row Hermite normal form of a full-rank set of integer vectors: positive
/// pivots, entries above each pivot reduced into `[0, pivot)`.
fn hermite_rows(mut rows: Vec<IntVec>, cols: usize) -> Vec<IntVec> {
    let mut top = 0;
    for c in 0..cols {
        if top == rows.len() {
            break;
        }
        loop {
            let best = (top..rows.len())
                .filter(|&i| !rows[i][c].is_zero())
                .min_by(|&x, &y| rows[x][c].abs().cmp(&rows[y][c].abs()));
            let Some(i) = best else { break };
            rows.swap(top, i);
            let mut done = true;
            for k in top + 1..rows.len() {
                if rows[k][c].is_zero() {
                    continue;
                }
                let q = rows[k][c].div_floor(&rows[top][c]);
                let pivot = rows[top].clone();
                for (x, p) in rows[k].iter_mut().zip(&pivot) {
                    *x -= &q * p;
                }
                if !rows[k][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if top < rows.len() && !rows[top][c].is_zero() {
            if rows[top][c].is_negative() {
                for x in rows[top].iter_mut() {
                    *x = -x.clone();
                }
            }
            let pivot = rows[top].clone();
            for row in rows.iter_mut().take(top) {
                let q = row[c].div_floor(&pivot[c]);
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x -= &q * p;
                }
            }
            top += 1;
        }
    }
    rows
}

/// A `ℤ`-basis of `V ∩ ℤ^d`, in row Hermite normal form. When the echelon
/// basis of `V` is integral this is that basis.
pub fn saturated_basis(v: &RatSubspace) -> Vec<Vec<Rational>> {
    let d = v.ambient_dim();
    let ann: Vec<IntVec> = v
        .annihilator()
        .basis()
        .iter()
        .map(|r| clear_denominators(r))
        .collect();
    let ech = ColumnEchelon::new(&ann, d);
    let kernel: Vec<IntVec> = (ech.rank()..d).map(|j| ech.u_column(j)).collect();
    hermite_rows(kernel, d)
        .iter()
        .map(|r| to_rational(r))
        .collect()
}

/// An integral solution of `A x = b` for integral `A` and `b`, if one exists.
pub fn solve_integral(a: &[Vec<Rational>], b: &[Rational], cols: usize) -> Option<Vec<Rational>> {
    let to_int = |x: &Rational| x.is_integer().then(|| x.to_integer());
    let rows: Option<Vec<IntVec>> = a
        .iter()
        .map(|r| r.iter().map(to_int).collect::<Option<IntVec>>())
        .collect();
    let rows = rows?;
    let rhs: IntVec = b.iter().map(to_int).collect::<Option<_>>()?;
    let ech = ColumnEchelon::new(&rows, cols);
    let mut y: IntVec = vec![BigInt::zero(); cols];
    for (j, &r) in ech.pivot_rows.iter().enumerate() {
        let partial: BigInt = (0..j).map(|i| &ech.h[r][i] * &y[i]).sum();
        let (q, rem) = (&rhs[r] - partial).div_rem(&ech.h[r][j]);
        if !rem.is_zero() {
            return None;
        }
        y[j] = q;
    }
    for (r, row) in ech.h.iter().enumerate() {
        let lhs: BigInt = row.iter().zip(&y).map(|(h, yi)| h * yi).sum();
        if lhs != rhs[r] {
            return None;
        }
    }
    let x: IntVec = (0..cols)
        .map(|i| ech.u[i].iter().zip(&y).map(|(u, yi)| u * yi).sum())
        .collect();
    Some(to_rational(&x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, ratio, Subspace};

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn integral_echelon_basis_is_kept() {
        let s = Subspace::span(4, &[v(&[0, 0, 1, 0]), v(&[0, 0, 0, 1])]).unwrap();
        assert_eq!(saturated_basis(&s), vec![v(&[0, 0, 1, 0]), v(&[0, 0, 0, 1])]);
    }

    #[test]
    fn fractional_echelon_basis_is_saturated() {
        // Echelon basis (1, 1/2); the lattice is generated by (2, 1).
        let s = Subspace::span(2, &[v(&[4, 2])]).unwrap();
        assert_eq!(s.basis()[0], vec![rat(1), ratio(1, 2)]);
        assert_eq!(saturated_basis(&s), vec![v(&[2, 1])]);
        // span{(1,1,0), (1,−1,0)} ∩ ℤ³ = ℤ² × 0, not the index-2 sublattice.
        let p = Subspace::span(3, &[v(&[1, 1, 0]), v(&[1, -1, 0])]).unwrap();
        assert_eq!(saturated_basis(&p), vec![v(&[1, 0, 0]), v(&[0, 1, 0])]);
    }

    #[test]
    fn full_and_zero_spaces() {
        assert_eq!(saturated_basis(&Subspace::<Rational>::full(2)), vec![v(&[1, 0]), v(&[0, 1])]);
        assert!(saturated_basis(&Subspace::<Rational>::zero(3)).is_empty());
    }

    #[test]
    fn integral_solutions() {
        let a = vec![v(&[2, 3])];
        let x = solve_integral(&a, &v(&[1]), 2).unwrap();
        assert_eq!(&x[0] * rat(2) + &x[1] * rat(3), rat(1));
        assert!(x.iter().all(|c| c.is_integer()));
        assert_eq!(solve_integral(&[v(&[2, 4])], &v(&[1]), 2), None);
        assert_eq!(solve_integral(&[v(&[1, 0]), v(&[1, 0])], &v(&[1, 2]), 2), None);
    }
}
