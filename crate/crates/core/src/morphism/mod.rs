//! Maps of fans, pushforward of invariant cycles, divisor pullback and
//! star subdivisions.

mod subdivision;

pub use subdivision::{product_on_nonsimplicial, simplicialize, star_subdivision, SIMPLICIALIZE_CAP};

use std::sync::Arc;

use num::{One, Zero};
use thiserror::Error;

use crate::complements::{ComplementError, Complements};
use crate::cycle::{same_fan, Cycle};
use crate::divisor::{DivisorError, QCartierDivisor};
use crate::fan::{ConeId, Fan, FanError};
use crate::intersection::{intersect, IntersectionError};
use crate::linalg::{
    clear_denominators, inverse_q, lattice_index, mat_vec_q, rank_q, to_qmatrix, to_qvec, IntMatrix, IntVec,
    LatticeBasis, QMatrix, QVec, Rational,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("map has shape {found:?}, expected {expected:?}")]
    Shape { expected: (usize, usize), found: (usize, usize) },
    #[error("image of source cone {0:?} lies in no target cone")]
    ConeNotMapped(Vec<usize>),
    #[error("morphism is not known to be proper: {0:?}")]
    NotProper(Properness),
    #[error("objects live on different fans")]
    FanMismatch,
    #[error("ray {0:?} is not primitive")]
    NotPrimitive(IntVec),
    #[error("ray {0:?} lies outside the support of the fan")]
    RayOutsideSupport(IntVec),
    #[error("no simplicial refinement within {0} star subdivisions")]
    CannotSimplicialize(usize),
    #[error("complements violate the pushforward condition at source {source_cone:?} and target {target_cone:?}")]
    Incompatible { source_cone: Vec<usize>, target_cone: Vec<usize> },
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Divisor(#[from] DivisorError),
    #[error(transparent)]
    Intersection(#[from] IntersectionError),
    #[error(transparent)]
    Complement(#[from] ComplementError),
}

/// Why a morphism was recognized as proper.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProperClass {
    /// Square map invertible over `Q` whose image cones tile every target cone.
    Refinement,
    /// Both fans are complete.
    CompleteFans,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Properness {
    Proper(ProperClass),
    /// `φ(witness) ∈ |Σ|` while `witness ∉ |Σ′|`.
    NotProper { witness: IntVec },
    Undecided,
}

/// A lattice map `φ: N′ → N` sending every cone of the source fan into a
/// cone of the target fan. `matrix` has one row per coordinate of `N`.
#[derive(Debug, Clone)]
pub struct ToricMorphism {
    matrix: IntMatrix,
    source: Arc<Fan>,
    target: Arc<Fan>,
    /// The smallest target cone containing the image of each source cone.
    image: Vec<ConeId>,
}

fn apply(matrix: &IntMatrix, x: &[Rational]) -> QVec {
    mat_vec_q(&to_qmatrix(matrix), x)
}

fn ray_sum(fan: &Fan, c: ConeId) -> QVec {
    let mut x = vec![Rational::zero(); fan.rank()];
    for v in fan.ray_vectors(c) {
        for (xi, vi) in x.iter_mut().zip(&v) {
            *xi += Rational::from_integer(vi.clone());
        }
    }
    x
}

impl ToricMorphism {
    pub fn new(matrix: IntMatrix, source: Arc<Fan>, target: Arc<Fan>) -> Result<Self, MorphismError> {
        let expected = (target.rank(), source.rank());
        let cols = matrix.first().map_or(source.rank(), Vec::len);
        if matrix.len() != expected.0 || cols != expected.1 || matrix.iter().any(|r| r.len() != cols) {
            return Err(MorphismError::Shape { expected, found: (matrix.len(), cols) });
        }
        let mut image = Vec::with_capacity(source.num_cones());
        for c in source.cone_ids() {
            // The image of a relative interior point lies in the relative
            // interior of the smallest cone containing the whole image.
            let not_mapped = || MorphismError::ConeNotMapped(source.cone_rays(c).to_vec());
            let t = target.minimal_cone_containing(&apply(&matrix, &ray_sum(&source, c))).ok_or_else(not_mapped)?;
            let contained = source
                .ray_vectors(c)
                .iter()
                .all(|v| target.contains_point(t, &apply(&matrix, &to_qvec(v))));
            if !contained {
                return Err(not_mapped());
            }
            image.push(t);
        }
        Ok(Self { matrix, source, target, image })
    }

    pub fn identity(source: Arc<Fan>, target: Arc<Fan>) -> Result<Self, MorphismError> {
        let n = target.rank();
        let id = (0..n)
            .map(|i| (0..n).map(|j| if i == j { One::one() } else { Zero::zero() }).collect())
            .collect();
        Self::new(id, source, target)
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn source(&self) -> &Arc<Fan> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Fan> {
        &self.target
    }

    /// `c(σ′)`.
    pub fn image_cone(&self, sigma: ConeId) -> ConeId {
        self.image[sigma.0]
    }

    pub fn apply(&self, x: &[Rational]) -> QVec {
        apply(&self.matrix, x)
    }

    /// `φ*: M → M′`.
    pub fn pull(&self, m: &[Rational]) -> QVec {
        let cols = self.source.rank();
        (0..cols)
            .map(|j| {
                self.matrix
                    .iter()
                    .zip(m)
                    .fold(Rational::zero(), |acc, (row, mi)| acc + Rational::from_integer(row[j].clone()) * mi)
            })
            .collect()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &ToricMorphism) -> Result<ToricMorphism, MorphismError> {
        if !same_fan(inner.target(), &self.source) {
            return Err(MorphismError::FanMismatch);
        }
        let rows = self.matrix.len();
        let cols = inner.source.rank();
        let mid = self.source.rank();
        let product = (0..rows)
            .map(|i| {
                (0..cols)
                    .map(|j| (0..mid).fold(Zero::zero(), |acc: crate::linalg::Integer, k| acc + &self.matrix[i][k] * &inner.matrix[k][j]))
                    .collect()
            })
            .collect();
        ToricMorphism::new(product, inner.source.clone(), self.target.clone())
    }

    fn inverse(&self) -> Option<QMatrix> {
        if self.source.rank() != self.target.rank() {
            return None;
        }
        inverse_q(&to_qmatrix(&self.matrix)).ok()
    }

    fn in_source_support(&self, y: &[Rational]) -> bool {
        self.source.minimal_cone_containing(y).is_some()
    }

    fn in_target_support(&self, x: &[Rational]) -> bool {
        self.target.minimal_cone_containing(x).is_some()
    }

    fn witness_at(&self, y: QVec) -> Option<IntVec> {
        (self.in_target_support(&self.apply(&y)) && !self.in_source_support(&y)).then(|| clear_denominators(&y))
    }

    /// Decides properness for square maps invertible over `Q` and for maps
    /// between complete fans; elsewhere only a witness can settle it.
    pub fn is_proper_restricted(&self) -> Properness {
        if self.source.is_complete() && self.target.is_complete() {
            return Properness::Proper(ProperClass::CompleteFans);
        }
        if let Some(inverse) = self.inverse() {
            return self.refinement_properness(&inverse);
        }
        self.search_witness(None).map_or(Properness::Undecided, |witness| Properness::NotProper { witness })
    }

    /// For invertible `φ`: proper iff the images of the source cones tile
    /// every maximal target cone. Within the span of a target cone `σ` the
    /// full-dimensional images never overlap, so they tile `σ` exactly when
    /// each of their facets is shared by two of them or lies on `∂σ`.
    fn refinement_properness(&self, inverse: &QMatrix) -> Properness {
        let src = &self.source;
        for &sigma in self.target.maximal_cones() {
            let d = self.target.dim(sigma);
            let tiles: Vec<ConeId> =
                src.cone_ids().filter(|&c| self.image[c.0] == sigma && src.dim(c) == d).collect();
            if tiles.is_empty() {
                let y = mat_vec_q(inverse, &ray_sum(&self.target, sigma));
                return match self.witness_at(y).or_else(|| self.search_witness(Some(inverse))) {
                    Some(witness) => Properness::NotProper { witness },
                    None => Properness::Undecided,
                };
            }
            for &t in &tiles {
                for &facet in src.facets(t) {
                    let shared = src.cones_over(facet).iter().filter(|c| tiles.contains(c)).count();
                    if shared >= 2 || self.image[facet.0] != sigma {
                        continue;
                    }
                    // A gap just beyond this facet.
                    let inside = ray_sum(src, t);
                    let on = ray_sum(src, facet);
                    for k in 1..64u32 {
                        let step = Rational::new(One::one(), num::pow(crate::linalg::int(2), k as usize));
                        let y: QVec = on.iter().zip(&inside).map(|(a, b)| a + (a - b) * &step).collect();
                        if let Some(witness) = self.witness_at(y) {
                            return Properness::NotProper { witness };
                        }
                    }
                    return Properness::Undecided;
                }
            }
        }
        Properness::Proper(ProperClass::Refinement)
    }

    /// Tries unit vectors, negated source rays and preimages of target rays.
    fn search_witness(&self, inverse: Option<&QMatrix>) -> Option<IntVec> {
        let n = self.source.rank();
        let mut candidates: Vec<QVec> = Vec::new();
        for i in 0..n {
            for s in [1i64, -1] {
                let mut e = vec![Rational::zero(); n];
                e[i] = Rational::from_integer(s.into());
                candidates.push(e);
            }
        }
        candidates.extend(self.source.rays().iter().map(|v| to_qvec(v).into_iter().map(|x| -x).collect()));
        if let Some(inv) = inverse {
            candidates.extend(self.target.rays().iter().map(|v| mat_vec_q(inv, &to_qvec(v))));
        }
        candidates.into_iter().find_map(|y| self.witness_at(y))
    }

    /// `[M′(σ′) : φ*(M(c(σ′)))]` when the codimensions agree and the map of
    /// orbits is finite; `None` when the cycle is pushed to zero.
    pub fn pushforward_multiplicity(&self, sigma: ConeId) -> Option<crate::linalg::Integer> {
        let target_cone = self.image[sigma.0];
        let codim_source = self.source.rank() - self.source.dim(sigma);
        let codim_target = self.target.rank() - self.target.dim(target_cone);
        if codim_source != codim_target {
            return None;
        }
        let n_src = self.source.rank();
        let sup_vectors = self.source.geometry(sigma).orthogonal_lattice();
        let sup = LatticeBasis::new(n_src, sup_vectors).expect("annihilator basis is independent");
        let generators: Vec<IntVec> = self
            .target
            .geometry(target_cone)
            .orthogonal_lattice()
            .iter()
            .map(|m| clear_integral(&self.pull(&to_qvec(m))))
            .collect();
        let sub = LatticeBasis::from_generators(n_src, &generators);
        if sub.rank() < sup.rank() {
            return None;
        }
        Some(lattice_index(&sub, &sup).expect("pullback of M(σ) lies in M′(σ′)"))
    }
}

fn clear_integral(v: &[Rational]) -> IntVec {
    v.iter().map(|x| x.to_integer()).collect()
}

/// `f_* z`.
pub fn pushforward(f: &ToricMorphism, z: &Cycle) -> Result<Cycle, MorphismError> {
    if !same_fan(z.fan(), f.source()) {
        return Err(MorphismError::FanMismatch);
    }
    match f.is_proper_restricted() {
        Properness::Proper(_) => {}
        other => return Err(MorphismError::NotProper(other)),
    }
    let terms = z.terms().filter_map(|(c, q)| {
        f.pushforward_multiplicity(c).map(|k| (f.image_cone(c), q * Rational::from_integer(k)))
    });
    Ok(Cycle::from_terms(f.target().clone(), terms))
}

/// `f* D`: the local equation on each maximal source cone is `φ*` of the
/// equation on a maximal target cone containing its image.
pub fn pullback_divisor(f: &ToricMorphism, d: &QCartierDivisor) -> Result<QCartierDivisor, MorphismError> {
    if !same_fan(d.fan(), f.target()) {
        return Err(MorphismError::FanMismatch);
    }
    let local = f
        .source()
        .maximal_cones()
        .iter()
        .map(|&c| f.pull(d.local_equation(f.image_cone(c))))
        .collect();
    Ok(QCartierDivisor::from_maximal(f.source().clone(), local)?)
}

/// Checks `φ*(Ψ(σ)) ⊂ Ψ′(σ′)` whenever `φ(σ′) ⊂ σ` with equal codimension.
pub fn check_pushforward_compatible(
    f: &ToricMorphism,
    psi: &Complements,
    psi_source: &Complements,
) -> Result<(), MorphismError> {
    if !same_fan(psi.fan(), f.target()) || !same_fan(psi_source.fan(), f.source()) {
        return Err(MorphismError::FanMismatch);
    }
    let (src, tgt) = (f.source(), f.target());
    for c in src.cone_ids() {
        let codim = src.rank() - src.dim(c);
        let own = psi_source.subspace(c);
        for sigma in tgt.star_cones(f.image_cone(c)) {
            if tgt.rank() - tgt.dim(sigma) != codim {
                continue;
            }
            let mut joined = own.clone();
            joined.extend(psi.subspace(sigma).iter().map(|u| f.pull(u)));
            if rank_q(&joined, src.rank()) != own.len() {
                return Err(MorphismError::Incompatible {
                    source_cone: src.cone_rays(c).to_vec(),
                    target_cone: tgt.cone_rays(sigma).to_vec(),
                });
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionReport {
    /// `f_*(f*D · z)`.
    pub left: Cycle,
    /// `D · f_* z`.
    pub right: Cycle,
}

impl ProjectionReport {
    pub fn holds(&self) -> bool {
        self.left == self.right
    }
}

pub fn projection_formula_check(
    f: &ToricMorphism,
    d: &QCartierDivisor,
    z: &Cycle,
    psi: &Complements,
    psi_source: &Complements,
) -> Result<ProjectionReport, MorphismError> {
    check_pushforward_compatible(f, psi, psi_source)?;
    let pulled = pullback_divisor(f, d)?;
    let left = pushforward(f, &intersect(&pulled, z, psi_source)?)?;
    let right = intersect(d, &pushforward(f, z)?, psi)?;
    Ok(ProjectionReport { left, right })
}

/// For every target cone `τ`, each source cone mapping into `τ` lies in one
/// of codimension `codim τ` that also maps into `τ`. Returns the first
/// target cone where this fails.
pub fn inverse_images_equidimensional(f: &ToricMorphism) -> Result<(), ConeId> {
    let (src, tgt) = (f.source(), f.target());
    for tau in tgt.cone_ids() {
        let codim = tgt.rank() - tgt.dim(tau);
        let inside: Vec<ConeId> = src.cone_ids().filter(|&c| tgt.is_face(f.image_cone(c), tau)).collect();
        let ok = inside.iter().all(|&c| {
            inside
                .iter()
                .any(|&top| src.rank() - src.dim(top) == codim && src.is_face(c, top))
        });
        if !ok {
            return Err(tau);
        }
    }
    Ok(())
}
