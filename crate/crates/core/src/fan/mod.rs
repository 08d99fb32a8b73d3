//! Fans of strongly convex rational polyhedral cones and their face posets.

mod cone;
mod geometry;

pub use cone::HalfspaceCone;
pub use geometry::{ConeGeometry, StarFan};

use std::collections::HashMap;
use std::sync::OnceLock;

use num::{One, Zero};
use thiserror::Error;

use crate::linalg::{is_primitive, rank_q, to_qmatrix, IntVec, Integer, LatticeBasis, Rational};

/// Index of a cone in a fan. Cones are ordered by dimension, then by their
/// sorted ray-index list, so the zero cone is always `ConeId(0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConeId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanError {
    #[error("ray {ray} has {found} coordinates, expected {expected}")]
    RayLength { ray: usize, expected: usize, found: usize },
    #[error("ray {0} is zero")]
    ZeroRay(usize),
    #[error("ray {0} is not primitive")]
    NotPrimitive(usize),
    #[error("rays {0} and {1} coincide")]
    DuplicateRay(usize, usize),
    #[error("ray {0} belongs to no cone")]
    UnusedRay(usize),
    #[error("cone {cone:?} refers to ray index {index} out of range")]
    RayIndexOutOfRange { cone: Vec<usize>, index: usize },
    #[error("cone {0:?} is not strongly convex")]
    NotStronglyConvex(Vec<usize>),
    #[error("ray {ray} of cone {cone:?} is not an extremal ray")]
    RayNotExtremal { cone: Vec<usize>, ray: usize },
    #[error("cones {0:?} and {1:?} do not meet in a common face")]
    IntersectionNotFace(Vec<usize>, Vec<usize>),
    #[error("no cone has rays {0:?}")]
    UnknownCone(Vec<usize>),
    #[error("cone {face:?} is not a facet of {cone:?}")]
    NotAFacet { face: Vec<usize>, cone: Vec<usize> },
}

#[derive(Debug, Clone)]
pub struct Cone {
    rays: Vec<usize>,
    dim: usize,
    faces: Vec<ConeId>,
    facets: Vec<ConeId>,
    over: Vec<ConeId>,
    home: ConeId,
}

impl Cone {
    /// Sorted ray indices.
    pub fn rays(&self) -> &[usize] {
        &self.rays
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_simplicial(&self) -> bool {
        self.rays.len() == self.dim
    }
}

#[derive(Debug, Clone)]
pub struct Fan {
    rank: usize,
    rays: Vec<IntVec>,
    cones: Vec<Cone>,
    by_rays: HashMap<Vec<usize>, ConeId>,
    maximal: Vec<ConeId>,
    geometry: Vec<OnceLock<ConeGeometry>>,
}

impl PartialEq for Fan {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank
            && self.rays == other.rays
            && self.cones.len() == other.cones.len()
            && self.cones.iter().zip(&other.cones).all(|(a, b)| a.rays == b.rays)
    }
}

impl Eq for Fan {}

/// Validates the input and builds the full face poset.
///
/// `cones` may list any generating family; the maximal cones are recovered.
pub fn build_fan(rank: usize, rays: Vec<IntVec>, cones: Vec<Vec<usize>>) -> Result<Fan, FanError> {
    for (i, r) in rays.iter().enumerate() {
        if r.len() != rank {
            return Err(FanError::RayLength { ray: i, expected: rank, found: r.len() });
        }
        if r.iter().all(Zero::is_zero) {
            return Err(FanError::ZeroRay(i));
        }
        if !is_primitive(r) {
            return Err(FanError::NotPrimitive(i));
        }
        if let Some(j) = rays[..i].iter().position(|s| s == r) {
            return Err(FanError::DuplicateRay(j, i));
        }
    }
    let mut listed: Vec<Vec<usize>> = Vec::new();
    for c in cones {
        if let Some(&index) = c.iter().find(|&&i| i >= rays.len()) {
            return Err(FanError::RayIndexOutOfRange { cone: c, index });
        }
        let mut c = c;
        c.sort_unstable();
        c.dedup();
        if !listed.contains(&c) {
            listed.push(c);
        }
    }
    // Face lattices of the listed cones, in global ray indices.
    let mut face_sets: Vec<Vec<Vec<usize>>> = Vec::new();
    for c in &listed {
        let local: Vec<IntVec> = c.iter().map(|&i| rays[i].clone()).collect();
        let faces = cone::faces(&local, rank).map_err(|e| match e {
            cone::ConeShapeError::NotPointed => FanError::NotStronglyConvex(c.clone()),
            cone::ConeShapeError::NotExtremal(i) => {
                FanError::RayNotExtremal { cone: c.clone(), ray: c[i] }
            }
        })?;
        face_sets.push(faces.into_iter().map(|f| f.iter().map(|&i| c[i]).collect()).collect());
    }
    let top: Vec<usize> = (0..listed.len())
        .filter(|&i| {
            !(0..listed.len()).any(|j| j != i && face_sets[j].contains(&listed[i]))
        })
        .collect();
    check_pairwise_intersections(rank, &rays, &listed, &face_sets, &top)?;

    let mut all: Vec<Vec<usize>> = top.iter().flat_map(|&i| face_sets[i].clone()).collect();
    if all.is_empty() {
        all.push(Vec::new());
    }
    all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    all.dedup();
    for i in 0..rays.len() {
        if !all.contains(&vec![i]) {
            return Err(FanError::UnusedRay(i));
        }
    }
    let dims: Vec<usize> = all
        .iter()
        .map(|c| {
            let m: Vec<IntVec> = c.iter().map(|&i| rays[i].clone()).collect();
            rank_q(&to_qmatrix(&m), rank)
        })
        .collect();
    let mut order: Vec<usize> = (0..all.len()).collect();
    order.sort_by(|&a, &b| dims[a].cmp(&dims[b]).then_with(|| all[a].cmp(&all[b])));
    let sets: Vec<Vec<usize>> = order.iter().map(|&i| all[i].clone()).collect();
    let dims: Vec<usize> = order.iter().map(|&i| dims[i]).collect();
    let by_rays: HashMap<Vec<usize>, ConeId> =
        sets.iter().enumerate().map(|(i, s)| (s.clone(), ConeId(i))).collect();

    let is_subset = |a: &[usize], b: &[usize]| a.iter().all(|x| b.binary_search(x).is_ok());
    let n = sets.len();
    let mut cones: Vec<Cone> = (0..n)
        .map(|i| Cone {
            rays: sets[i].clone(),
            dim: dims[i],
            faces: Vec::new(),
            facets: Vec::new(),
            over: Vec::new(),
            home: ConeId(i),
        })
        .collect();
    for i in 0..n {
        for j in 0..n {
            if dims[j] <= dims[i] && is_subset(&sets[j], &sets[i]) {
                cones[i].faces.push(ConeId(j));
                if dims[j] + 1 == dims[i] {
                    cones[i].facets.push(ConeId(j));
                    cones[j].over.push(ConeId(i));
                }
            }
        }
    }
    let maximal: Vec<ConeId> = (0..n).filter(|&i| cones[i].over.is_empty()).map(ConeId).collect();
    for i in 0..n {
        cones[i].home = *maximal
            .iter()
            .find(|m| is_subset(&sets[i], &sets[m.0]))
            .expect("every cone lies in a maximal cone");
    }
    Ok(Fan {
        rank,
        rays,
        geometry: (0..n).map(|_| OnceLock::new()).collect(),
        cones,
        by_rays,
        maximal,
    })
}

fn check_pairwise_intersections(
    rank: usize,
    rays: &[IntVec],
    listed: &[Vec<usize>],
    face_sets: &[Vec<Vec<usize>>],
    top: &[usize],
) -> Result<(), FanError> {
    let halfspaces: Vec<HalfspaceCone> = top
        .iter()
        .map(|&i| {
            let local: Vec<IntVec> = listed[i].iter().map(|&r| rays[r].clone()).collect();
            cone::halfspaces(&local, rank).expect("validated cone")
        })
        .collect();
    for (a, &i) in top.iter().enumerate() {
        for (b, &j) in top.iter().enumerate().skip(a + 1) {
            let common: Vec<usize> =
                listed[i].iter().copied().filter(|r| listed[j].contains(r)).collect();
            let fail = || FanError::IntersectionNotFace(listed[i].clone(), listed[j].clone());
            if !face_sets[i].contains(&common) || !face_sets[j].contains(&common) {
                return Err(fail());
            }
            let meet = halfspaces[a].intersect(&halfspaces[b]);
            for x in meet.extreme_rays(rank) {
                if !common.iter().any(|&r| rays[r] == x) {
                    return Err(fail());
                }
            }
        }
    }
    Ok(())
}

impl Fan {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[IntVec] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &IntVec {
        &self.rays[i]
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn num_cones(&self) -> usize {
        self.cones.len()
    }

    pub fn cone_ids(&self) -> impl Iterator<Item = ConeId> + '_ {
        (0..self.cones.len()).map(ConeId)
    }

    pub fn cone(&self, id: ConeId) -> &Cone {
        &self.cones[id.0]
    }

    pub fn dim(&self, id: ConeId) -> usize {
        self.cones[id.0].dim
    }

    pub fn cone_rays(&self, id: ConeId) -> &[usize] {
        &self.cones[id.0].rays
    }

    pub fn zero_cone(&self) -> ConeId {
        ConeId(0)
    }

    /// The cone whose ray set is exactly `rays` (in any order).
    pub fn cone_by_rays(&self, rays: &[usize]) -> Option<ConeId> {
        let mut key = rays.to_vec();
        key.sort_unstable();
        key.dedup();
        self.by_rays.get(&key).copied()
    }

    /// The cone spanned by one ray.
    pub fn ray_cone(&self, i: usize) -> ConeId {
        self.by_rays[&vec![i]]
    }

    pub fn maximal_cones(&self) -> &[ConeId] {
        &self.maximal
    }

    pub fn is_maximal(&self, id: ConeId) -> bool {
        self.cones[id.0].over.is_empty()
    }

    /// All faces of the cone, including itself, in cone order.
    pub fn faces(&self, id: ConeId) -> &[ConeId] {
        &self.cones[id.0].faces
    }

    pub fn facets(&self, id: ConeId) -> &[ConeId] {
        &self.cones[id.0].facets
    }

    /// Cones having `id` as a facet.
    pub fn cones_over(&self, id: ConeId) -> &[ConeId] {
        &self.cones[id.0].over
    }

    /// Whether `face` is a face of `cone` (not necessarily proper).
    pub fn is_face(&self, face: ConeId, cone: ConeId) -> bool {
        self.cones[cone.0].faces.binary_search(&face).is_ok()
    }

    /// The first maximal cone containing `id`.
    pub fn home(&self, id: ConeId) -> ConeId {
        self.cones[id.0].home
    }

    /// Cones containing `id` as a face, including itself.
    pub fn star_cones(&self, id: ConeId) -> Vec<ConeId> {
        self.cone_ids().filter(|&t| self.is_face(id, t)).collect()
    }

    pub fn cones_of_dim(&self, d: usize) -> Vec<ConeId> {
        self.cone_ids().filter(|&c| self.dim(c) == d).collect()
    }

    pub fn ray_vectors(&self, id: ConeId) -> Vec<IntVec> {
        self.cone_rays(id).iter().map(|&i| self.rays[i].clone()).collect()
    }

    pub fn geometry(&self, id: ConeId) -> &ConeGeometry {
        self.geometry[id.0].get_or_init(|| ConeGeometry::compute(self, id))
    }

    /// The saturated sublattice spanned by the cone.
    pub fn lattice_of(&self, id: ConeId) -> LatticeBasis {
        self.geometry(id).chart.sub_basis()
    }

    /// Index of the lattice generated by the rays inside its saturation.
    pub fn multiplicity(&self, id: ConeId) -> Integer {
        self.geometry(id).multiplicity.clone()
    }

    /// The lift in `N_τ` of the primitive generator of the image of `τ` in `N(σ)`.
    pub fn primitive_quotient_generator(&self, tau: ConeId, sigma: ConeId) -> Result<&IntVec, FanError> {
        self.geometry(sigma)
            .over
            .iter()
            .find(|(t, _)| *t == tau)
            .map(|(_, n)| n)
            .ok_or_else(|| FanError::NotAFacet {
                face: self.cone_rays(sigma).to_vec(),
                cone: self.cone_rays(tau).to_vec(),
            })
    }

    pub fn contains_point(&self, id: ConeId, x: &[Rational]) -> bool {
        self.geometry(id).halfspaces.contains(x)
    }

    /// The smallest cone containing `x`, if `x` is in the support.
    pub fn minimal_cone_containing(&self, x: &[Rational]) -> Option<ConeId> {
        self.cone_ids().find(|&c| self.contains_point(c, x))
    }

    pub fn is_simplicial(&self) -> bool {
        self.cones.iter().all(Cone::is_simplicial)
    }

    pub fn is_smooth(&self) -> bool {
        self.is_simplicial() && self.cone_ids().all(|c| self.multiplicity(c).is_one())
    }

    /// Complete exactly when every maximal cone is full-dimensional and every
    /// cone of codimension one lies in exactly two maximal cones.
    pub fn is_complete(&self) -> bool {
        let n = self.rank;
        if n == 0 {
            return true;
        }
        self.maximal.iter().all(|&m| self.dim(m) == n)
            && self
                .cone_ids()
                .filter(|&c| self.dim(c) + 1 == n)
                .all(|c| self.cones_over(c).len() == 2)
    }

    pub fn star(&self, sigma: ConeId) -> StarFan {
        StarFan::new(self, sigma)
    }

    /// The cones strictly between `sigma` and a cone `tau` of dimension
    /// `dim sigma + 2`; a fan always has exactly two.
    pub fn diamond(&self, sigma: ConeId, tau: ConeId) -> Vec<ConeId> {
        self.cones_over(sigma)
            .iter()
            .copied()
            .filter(|&g| self.is_face(g, tau))
            .collect()
    }
}

#[cfg(test)]
mod tests;
