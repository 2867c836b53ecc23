#![allow(dead_code)]

use std::collections::BTreeMap;

use hodge_fans::hodge::{HodgeError, HodgeNumbers, SplitOrbitSpec, BoundaryPoint};
use hodge_fans::linalg::{gauss, GaussMatrix, GaussRational, RatMatrix, Rational};
use hodge_fans::symplectic::SymplecticSpace;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn r(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// A product of random elementary integral matrices.
pub fn random_unimodular(rng: &mut ChaCha8Rng, m: usize) -> RatMatrix {
    let mut g = RatMatrix::identity(m);
    if m < 2 {
        if rng.gen_bool(0.5) {
            g[(0, 0)] = r(-1);
        }
        return g;
    }
    for _ in 0..3 {
        let i = rng.gen_range(0..m);
        let mut j = rng.gen_range(0..m);
        if j == i {
            j = (i + 1) % m;
        }
        let mut e = RatMatrix::identity(m);
        e[(i, j)] = r(rng.gen_range(-2..=2));
        g = g.mul(&e).unwrap();
    }
    g
}

pub fn random_symmetric(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> RatMatrix {
    let mut b = RatMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = r(rng.gen_range(-bound..=bound));
            b[(i, j)] = v.clone();
            b[(j, i)] = v;
        }
    }
    b
}

/// A random element of `Sp(n, ℤ)` built from Levi and unipotent factors.
pub fn random_sp_z(rng: &mut ChaCha8Rng, n: usize) -> RatMatrix {
    let sp = SymplecticSpace::new(n);
    let mut g = sp.levi(&random_unimodular(rng, n)).unwrap();
    let u = sp.upper_unipotent(&random_symmetric(rng, n, 1)).unwrap();
    let l = sp.lower_unipotent(&random_symmetric(rng, n, 1)).unwrap();
    g = g.mul(&u).unwrap().mul(&l).unwrap();
    g
}

/// Symmetric `k × k` Gaussian matrix with positive definite imaginary part.
pub fn random_siegel_point(rng: &mut ChaCha8Rng, k: usize) -> GaussMatrix {
    let re = random_symmetric(rng, k, 2);
    let b = RatMatrix::from_vec(
        k,
        k,
        (0..k * k).map(|_| r(rng.gen_range(-1..=1))).collect(),
    )
    .unwrap();
    let im = b.transpose().mul(&b).unwrap().add(&RatMatrix::identity(k)).unwrap();
    let mut z = GaussMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            z[(i, j)] = GaussRational::new(re[(i, j)].clone(), im[(i, j)].clone());
        }
    }
    z
}

pub fn random_invertible(rng: &mut ChaCha8Rng, m: usize) -> RatMatrix {
    loop {
        let a = RatMatrix::from_vec(
            m,
            m,
            (0..m * m).map(|_| r(rng.gen_range(-2..=2))).collect(),
        )
        .unwrap();
        if a.inverse().is_ok() {
            return a;
        }
    }
}

/// Randomizes `A`, `Z'`, `z` and `γ` of a split-orbit spec.
pub fn random_spec(
    rng: &mut ChaCha8Rng,
    n: usize,
    hodge: &HodgeNumbers,
    weight_zero: &BTreeMap<i32, usize>,
) -> SplitOrbitSpec {
    let mut spec = SplitOrbitSpec::standard(n, hodge.clone(), weight_zero.clone());
    let m = spec.m();
    spec.a = random_invertible(rng, m);
    spec.z_prime = random_siegel_point(rng, n - m);
    spec.z = gauss(rng.gen_range(-3..=3), rng.gen_range(0..=3));
    spec.gamma = random_sp_z(rng, n);
    spec
}

pub type MenuEntry = (usize, HodgeNumbers, Vec<BTreeMap<i32, usize>>);

/// Hodge numbers with the weight-zero patterns tried for each.
pub fn menu() -> Vec<MenuEntry> {
    let h = |pairs: &[(i32, usize)]| HodgeNumbers::from_pairs(pairs).unwrap();
    let w = |pairs: &[(i32, usize)]| pairs.iter().copied().collect::<BTreeMap<_, _>>();
    vec![
        (
            2,
            HodgeNumbers::weil_1111(),
            vec![w(&[(0, 1)]), w(&[(1, 1), (-1, 1)])],
        ),
        (2, HodgeNumbers::siegel(2), vec![w(&[(0, 1)]), w(&[(0, 2)])]),
        (
            3,
            h(&[(1, 1), (0, 2), (-1, 2), (-2, 1)]),
            vec![
                w(&[(0, 1)]),
                w(&[(0, 2)]),
                w(&[(1, 1), (-1, 1)]),
                w(&[(0, 1), (1, 1), (-1, 1)]),
            ],
        ),
        (3, HodgeNumbers::siegel(3), vec![w(&[(0, 1)]), w(&[(0, 2)]), w(&[(0, 3)])]),
        (
            3,
            h(&[(2, 1), (1, 1), (0, 1), (-1, 1), (-2, 1), (-3, 1)]),
            vec![w(&[(1, 1), (-1, 1)]), w(&[(0, 1)]), w(&[(2, 1), (-2, 1)])],
        ),
    ]
}

/// `count` random boundary points cycling through [`menu`].
pub fn generated_points(seed: u64, count: usize) -> Vec<(BTreeMap<i32, usize>, BoundaryPoint)> {
    let mut rng = rng(seed);
    let mut cases = Vec::new();
    for (n, h, patterns) in menu() {
        for wz in patterns {
            cases.push((n, h.clone(), wz));
        }
    }
    let mut out = Vec::new();
    let mut i = 0;
    while out.len() < count {
        let (n, h, wz) = &cases[i % cases.len()];
        i += 1;
        let spec = random_spec(&mut rng, *n, h, wz);
        match spec.build() {
            Ok(pt) => out.push((wz.clone(), pt)),
            Err(HodgeError::InvalidSpec(msg)) => panic!("menu entry rejected: {msg}"),
            Err(e) => panic!("build failed: {e}"),
        }
    }
    out
}
