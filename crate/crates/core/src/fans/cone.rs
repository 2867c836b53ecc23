use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::FanError;
use crate::linalg::{dot, RatMatrix, RatSubspace, Rational, Subspace};
use crate::symplectic::{Nilpotent, SymplecticSpace};

/// A finitely generated rational polyhedral cone `Σ ℝ_{≥0} N_j` of nilpotents.
///
/// Zero generators are dropped on construction. The cone must be pointed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cone {
    space: SymplecticSpace,
    generators: Vec<Nilpotent>,
}

/// Lexicographic key of a canonical cone: its primitive extreme rays, flattened.
pub type ConeKey = Vec<Vec<Rational>>;

impl Cone {
    pub fn new(space: SymplecticSpace, generators: Vec<Nilpotent>) -> Result<Self, FanError> {
        if generators.iter().any(|g| g.space() != space) {
            return Err(FanError::SpaceMismatch);
        }
        let generators: Vec<Nilpotent> = generators.into_iter().filter(|g| !g.is_zero()).collect();
        let cone = Cone { space, generators };
        if !cone.geometry().pointed {
            return Err(FanError::NotPointed);
        }
        Ok(cone)
    }

    /// The cone `{0}`.
    pub fn zero(space: SymplecticSpace) -> Self {
        Cone {
            space,
            generators: Vec::new(),
        }
    }

    /// `ℝ_{≥0} N`.
    pub fn ray(n: Nilpotent) -> Self {
        let space = n.space();
        Cone::new(space, vec![n]).expect("a single nonzero ray is pointed")
    }

    pub fn space(&self) -> SymplecticSpace {
        self.space
    }

    pub fn generators(&self) -> &[Nilpotent] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    /// Dimension of the linear span.
    pub fn dim(&self) -> usize {
        self.span().dim()
    }

    /// Sum of the generators, a point of the relative interior.
    pub fn interior_point(&self) -> Result<Nilpotent, FanError> {
        Ok(Nilpotent::new(self.space, self.generator_sum())?)
    }

    /// Sum of the generator matrices, without a nilpotency check.
    pub fn generator_sum(&self) -> RatMatrix {
        let d = self.space.dim();
        let mut acc = RatMatrix::zeros(d, d);
        for g in &self.generators {
            acc = acc.add(g.matrix()).expect("same size");
        }
        acc
    }

    /// Linear span of the generators inside the flattened matrix space.
    pub fn span(&self) -> RatSubspace {
        let d = self.space.dim();
        let flat: Vec<Vec<Rational>> = self.generators.iter().map(flatten).collect();
        Subspace::span(d * d, &flat).expect("uniform length")
    }

    /// All faces, including `{0}` and the cone itself, ordered by dimension
    /// and then by the indices of the generators they contain.
    pub fn faces(&self) -> Vec<Cone> {
        let geo = self.geometry();
        let mut sets: BTreeSet<Vec<usize>> = BTreeSet::new();
        let all: Vec<usize> = (0..self.generators.len()).collect();
        sets.insert(all);
        let facets: Vec<Vec<usize>> = geo.facets.iter().map(|f| f.tight.clone()).collect();
        let mut frontier: Vec<Vec<usize>> = facets.clone();
        while let Some(face) = frontier.pop() {
            if !sets.insert(face.clone()) {
                continue;
            }
            for f in &facets {
                let meet: Vec<usize> = face.iter().copied().filter(|i| f.contains(i)).collect();
                if !sets.contains(&meet) {
                    frontier.push(meet);
                }
            }
        }
        let mut out: Vec<(usize, Vec<usize>, Cone)> = sets
            .into_iter()
            .map(|s| {
                let c = self.sub_cone(&s);
                (c.dim(), s, c)
            })
            .collect();
        out.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        out.into_iter().map(|(_, _, c)| c).collect()
    }

    fn sub_cone(&self, idx: &[usize]) -> Cone {
        Cone {
            space: self.space,
            generators: idx.iter().map(|&i| self.generators[i].clone()).collect(),
        }
    }

    /// Canonical form: one primitive integral generator per extreme ray,
    /// sorted lexicographically.
    pub fn canonical(&self) -> Cone {
        let mut rays: Vec<(Vec<Rational>, Nilpotent)> = self
            .extreme_rays()
            .into_iter()
            .map(|g| {
                let p = primitive(&flatten(&g));
                let m = unflatten(self.space, &p);
                (p, m)
            })
            .collect();
        rays.sort_by(|a, b| a.0.cmp(&b.0));
        rays.dedup_by(|a, b| a.0 == b.0);
        Cone {
            space: self.space,
            generators: rays.into_iter().map(|(_, m)| m).collect(),
        }
    }

    pub fn key(&self) -> ConeKey {
        self.canonical().generators.iter().map(flatten).collect()
    }

    /// Geometric equality.
    pub fn same_as(&self, other: &Cone) -> bool {
        self.space == other.space && self.key() == other.key()
    }

    /// One generator per one-dimensional face.
    pub fn extreme_rays(&self) -> Vec<Nilpotent> {
        let geo = self.geometry();
        let d = geo.dim;
        if d == 0 {
            return Vec::new();
        }
        if d == 1 {
            return vec![self.generators[0].clone()];
        }
        // Generator g spans an extreme ray iff the facets through g cut out a
        // line, i.e. their normals have rank d − 1.
        let mut seen: BTreeSet<Vec<Rational>> = BTreeSet::new();
        let mut out = Vec::new();
        for (i, g) in self.generators.iter().enumerate() {
            let normals: Vec<Vec<Rational>> = geo
                .facets
                .iter()
                .filter(|f| f.tight.contains(&i))
                .map(|f| f.normal.clone())
                .collect();
            let rank = if normals.is_empty() {
                0
            } else {
                RatMatrix::from_rows(d, &normals).expect("rows").rank()
            };
            if rank + 1 == d {
                let key = primitive(&flatten(g));
                if seen.insert(key) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    /// `Ad(γ)σ`.
    pub fn conjugate(&self, gamma: &RatMatrix) -> Result<Cone, FanError> {
        let generators = self
            .generators
            .iter()
            .map(|g| g.conjugate(gamma))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Cone {
            space: self.space,
            generators,
        })
    }

    /// Exact membership test for a nilpotent.
    pub fn contains(&self, n: &Nilpotent) -> bool {
        let x = flatten(n);
        let span = self.span();
        let Some(coords) = span.coordinates(&x) else {
            return false;
        };
        self.geometry()
            .facets
            .iter()
            .all(|f| !dot(&f.normal, &coords).is_negative())
    }

    /// `σ ∩ τ`, computed exactly by enumerating the rays of the combined
    /// inequality system.
    pub fn intersect(&self, other: &Cone) -> Result<Cone, FanError> {
        if self.space != other.space {
            return Err(FanError::SpaceMismatch);
        }
        let (sa, sb) = (self.span(), other.span());
        let common = sa.intersect(&sb).expect("same ambient");
        let k = common.dim();
        if k == 0 {
            return Ok(Cone::zero(self.space));
        }
        let ga = self.geometry();
        let gb = other.geometry();
        // Each inequality f·coords_σ(x) ≥ 0, pulled back to coordinates of `common`.
        let mut ineqs: Vec<Vec<Rational>> = Vec::new();
        for (geo, span) in [(&ga, &sa), (&gb, &sb)] {
            let pulled: Vec<Vec<Rational>> = common
                .basis()
                .iter()
                .map(|b| span.coordinates(b).expect("inside span"))
                .collect();
            for f in &geo.facets {
                let row: Vec<Rational> = pulled.iter().map(|c| dot(&f.normal, c)).collect();
                if row.iter().any(|x| !x.is_zero()) {
                    ineqs.push(row);
                }
            }
        }
        let mut rays: Vec<Vec<Rational>> = Vec::new();
        let feasible = |y: &[Rational]| ineqs.iter().all(|r| !dot(r, y).is_negative());
        for subset in subsets(ineqs.len(), k - 1) {
            let kernel = if subset.is_empty() {
                RatMatrix::zeros(0, k).kernel_vectors()
            } else {
                let rows: Vec<Vec<Rational>> = subset.iter().map(|&i| ineqs[i].clone()).collect();
                RatMatrix::from_rows(k, &rows).expect("rows").kernel_vectors()
            };
            if kernel.len() != 1 {
                continue;
            }
            let r = &kernel[0];
            let neg: Vec<Rational> = r.iter().map(|x| -x.clone()).collect();
            for cand in [r.clone(), neg] {
                if feasible(&cand) {
                    rays.push(cand);
                }
            }
        }
        let d = self.space.dim();
        let mut gens = Vec::new();
        let mut seen = BTreeSet::new();
        for y in rays {
            let mut x = vec![Rational::zero(); d * d];
            for (c, b) in y.iter().zip(common.basis()) {
                for (xi, bi) in x.iter_mut().zip(b) {
                    *xi = xi.clone() + c * bi;
                }
            }
            let p = primitive(&x);
            if seen.insert(p.clone()) {
                gens.push(unflatten(self.space, &p));
            }
        }
        Ok(Cone {
            space: self.space,
            generators: gens,
        })
    }

    /// `τ` is a face of `σ`.
    pub fn has_face(&self, tau: &Cone) -> bool {
        let key = tau.key();
        self.faces().iter().any(|f| f.key() == key)
    }

    fn geometry(&self) -> Geometry {
        let span = self.span();
        let d = span.dim();
        let coords: Vec<Vec<Rational>> = self
            .generators
            .iter()
            .map(|g| span.coordinates(&flatten(g)).expect("in span"))
            .collect();
        let mut facets: Vec<Facet> = Vec::new();
        if d > 0 {
            let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
            for subset in subsets(coords.len(), d - 1) {
                let normal = if d == 1 {
                    vec![Rational::one()]
                } else {
                    let rows: Vec<Vec<Rational>> = subset.iter().map(|&i| coords[i].clone()).collect();
                    let ker = RatMatrix::from_rows(d, &rows).expect("rows").kernel_vectors();
                    if ker.len() != 1 {
                        continue;
                    }
                    ker.into_iter().next().expect("one vector")
                };
                let values: Vec<Rational> = coords.iter().map(|c| dot(&normal, c)).collect();
                let normal = if values.iter().all(|v| !v.is_negative()) {
                    normal
                } else if values.iter().all(|v| !v.is_positive()) {
                    normal.iter().map(|x| -x.clone()).collect()
                } else {
                    continue;
                };
                let tight: Vec<usize> = (0..coords.len()).filter(|&i| values[i].is_zero()).collect();
                if tight.len() == coords.len() {
                    continue;
                }
                if seen.insert(tight.clone()) {
                    facets.push(Facet { normal, tight });
                }
            }
        }
        // Pointed iff the facet hyperplanes meet only in 0.
        let pointed = if d == 0 {
            true
        } else if facets.is_empty() {
            false
        } else {
            let rows: Vec<Vec<Rational>> = facets.iter().map(|f| f.normal.clone()).collect();
            RatMatrix::from_rows(d, &rows).expect("rows").rank() == d
        };
        Geometry { dim: d, facets, pointed }
    }
}

struct Facet {
    normal: Vec<Rational>,
    tight: Vec<usize>,
}

struct Geometry {
    dim: usize,
    facets: Vec<Facet>,
    pointed: bool,
}

/// Row-major entries of a nilpotent's matrix.
pub fn flatten(n: &Nilpotent) -> Vec<Rational> {
    n.matrix().entries().to_vec()
}

fn unflatten(space: SymplecticSpace, v: &[Rational]) -> Nilpotent {
    let d = space.dim();
    let m = RatMatrix::from_vec(d, d, v.to_vec()).expect("square");
    Nilpotent::new(space, m).expect("positive multiple of a nilpotent")
}

/// Scales a nonzero rational vector to a primitive integral vector with the
/// same direction.
pub fn primitive(v: &[Rational]) -> Vec<Rational> {
    let mut l = BigInt::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter().map(|x| Rational::from_integer(x / &g)).collect()
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            break;
        };
        cur[i] += 1;
        for j in (i + 1)..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::{sym_to_eta, IsotropicSubspace};

    fn sym_cone(entries: &[[i64; 3]]) -> Cone {
        let sp = SymplecticSpace::new(2);
        let s = IsotropicSubspace::standard(sp, 2);
        let gens = entries
            .iter()
            .map(|e| sym_to_eta(&s, &RatMatrix::from_i64(2, 2, &[e[0], e[1], e[1], e[2]])).unwrap())
            .collect();
        Cone::new(sp, gens).unwrap()
    }

    #[test]
    fn subsets_enumerate() {
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(subsets(2, 0), vec![Vec::<usize>::new()]);
        assert!(subsets(1, 2).is_empty());
    }

    #[test]
    fn ray_faces() {
        let c = sym_cone(&[[1, 0, 0]]);
        let f = c.faces();
        assert_eq!(f.len(), 2);
        assert!(f[0].is_zero());
    }

    #[test]
    fn sigma0_has_eight_faces() {
        let c = sym_cone(&[[1, 0, 0], [0, 0, 1], [1, -1, 1]]);
        let f = c.faces();
        assert_eq!(f.len(), 8);
        let dims: Vec<usize> = f.iter().map(|x| x.dim()).collect();
        assert_eq!(dims, vec![0, 1, 1, 1, 2, 2, 2, 3]);
    }

    #[test]
    fn two_rays_four_faces() {
        assert_eq!(sym_cone(&[[1, 0, 0], [0, 0, 1]]).faces().len(), 4);
    }

    #[test]
    fn non_pointed_rejected() {
        let sp = SymplecticSpace::new(2);
        let s = IsotropicSubspace::standard(sp, 2);
        let a = sym_to_eta(&s, &RatMatrix::from_i64(2, 2, &[1, 0, 0, 0])).unwrap();
        assert_eq!(Cone::new(sp, vec![a.clone(), a.neg()]), Err(FanError::NotPointed));
    }

    #[test]
    fn redundant_generator_is_not_extreme() {
        let c = sym_cone(&[[1, 0, 0], [0, 0, 1], [1, 0, 1]]);
        assert_eq!(c.extreme_rays().len(), 2);
        assert_eq!(c.canonical().generators().len(), 2);
        assert!(c.same_as(&sym_cone(&[[0, 0, 2], [3, 0, 0]])));
    }

    #[test]
    fn intersection_of_adjacent_cells() {
        let a = sym_cone(&[[1, 0, 0], [0, 0, 1], [1, -1, 1]]);
        let b = sym_cone(&[[1, 0, 0], [0, 0, 1], [1, 1, 1]]);
        let i = a.intersect(&b).unwrap();
        assert!(i.same_as(&sym_cone(&[[1, 0, 0], [0, 0, 1]])));
        assert!(a.has_face(&i) && b.has_face(&i));
    }

    #[test]
    fn membership() {
        let a = sym_cone(&[[1, 0, 0], [0, 0, 1], [1, -1, 1]]);
        let s = IsotropicSubspace::standard(SymplecticSpace::new(2), 2);
        let inside = sym_to_eta(&s, &RatMatrix::from_i64(2, 2, &[2, -1, -1, 2])).unwrap();
        let outside = sym_to_eta(&s, &RatMatrix::from_i64(2, 2, &[2, 1, 1, 2])).unwrap();
        assert!(a.contains(&inside));
        assert!(!a.contains(&outside));
    }
}
