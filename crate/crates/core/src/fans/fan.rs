use std::collections::BTreeMap;

use super::{Cone, ConeKey, FanError};
use crate::linalg::RatMatrix;
use crate::symplectic::SymplecticSpace;

/// A finite list of cones, typically a truncation of an infinite
/// `Γ`-orbit fan, together with generators of the acting group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    space: SymplecticSpace,
    cones: Vec<Cone>,
    group_gens: Vec<RatMatrix>,
}

/// Why a collection of cones fails to be a fan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FanViolation {
    /// `face` is a face of cone `cone` but is not listed.
    MissingFace { cone: usize, face: Cone },
    /// The intersection of cones `first` and `second` is not a face of both.
    BadIntersection { first: usize, second: usize },
}

/// Outcome of [`validate_fan`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanValidation {
    pub violation: Option<FanViolation>,
}

impl FanValidation {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

impl Fan {
    pub fn new(space: SymplecticSpace, cones: Vec<Cone>, group_gens: Vec<RatMatrix>) -> Result<Self, FanError> {
        if cones.iter().any(|c| c.space() != space) {
            return Err(FanError::SpaceMismatch);
        }
        let d = space.dim();
        if group_gens.iter().any(|g| g.rows() != d || !space.is_symplectic(g)) {
            return Err(FanError::NotSymplectic);
        }
        Ok(Fan {
            space,
            cones,
            group_gens,
        })
    }

    pub fn empty(space: SymplecticSpace) -> Self {
        Fan {
            space,
            cones: Vec::new(),
            group_gens: Vec::new(),
        }
    }

    /// The faces of a single cone.
    pub fn from_faces(sigma: &Cone) -> Self {
        Fan {
            space: sigma.space(),
            cones: sigma.faces(),
            group_gens: Vec::new(),
        }
    }

    pub fn space(&self) -> SymplecticSpace {
        self.space
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn group_gens(&self) -> &[RatMatrix] {
        &self.group_gens
    }

    pub fn len(&self) -> usize {
        self.cones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    /// Cones that are not a proper face of another listed cone.
    pub fn maximal_cones(&self) -> Vec<usize> {
        let dims: Vec<usize> = self.cones.iter().map(|c| c.dim()).collect();
        (0..self.cones.len())
            .filter(|&i| {
                !(0..self.cones.len()).any(|j| {
                    j != i && dims[j] > dims[i] && self.cones[j].has_face(&self.cones[i])
                })
            })
            .collect()
    }

    /// Index of each listed cone by canonical key.
    pub fn key_index(&self) -> BTreeMap<ConeKey, usize> {
        let mut out = BTreeMap::new();
        for (i, c) in self.cones.iter().enumerate() {
            out.entry(c.key()).or_insert(i);
        }
        out
    }

    /// Whether `n`'s cone is listed, up to canonical form.
    pub fn contains_cone(&self, c: &Cone) -> bool {
        let k = c.key();
        self.cones.iter().any(|x| x.key() == k)
    }
}

/// Checks closure under faces, then that every two maximal cones meet in a
/// common face. Given face closure, the second check implies it for all pairs.
pub fn validate_fan(fan: &Fan) -> FanValidation {
    let keys = fan.key_index();
    for (i, c) in fan.cones.iter().enumerate() {
        for f in c.faces() {
            if !keys.contains_key(&f.key()) {
                return FanValidation {
                    violation: Some(FanViolation::MissingFace { cone: i, face: f }),
                };
            }
        }
    }
    let maximal = fan.maximal_cones();
    let faces: BTreeMap<usize, Vec<ConeKey>> = maximal
        .iter()
        .map(|&i| (i, fan.cones[i].faces().iter().map(|f| f.key()).collect()))
        .collect();
    for (a, &i) in maximal.iter().enumerate() {
        for &j in &maximal[a + 1..] {
            let ok = match fan.cones[i].intersect(&fan.cones[j]) {
                Ok(meet) => {
                    let k = meet.key();
                    faces[&i].contains(&k) && faces[&j].contains(&k)
                }
                Err(_) => false,
            };
            if !ok {
                return FanValidation {
                    violation: Some(FanViolation::BadIntersection { first: i, second: j }),
                };
            }
        }
    }
    FanValidation { violation: None }
}
