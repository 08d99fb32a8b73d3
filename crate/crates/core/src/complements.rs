//! Choices of complements: for every cone `σ` a subspace `Ψ(σ) ⊆ M_Q` with
//! `Ψ(σ) ⊕ σ^⊥ = M_Q` and `Ψ(τ) ⊆ Ψ(σ)` whenever `τ ≺ σ`.
//!
//! The projection `π_σ` onto `σ^⊥` along `Ψ(σ)` is what makes the action of
//! a divisor on an arbitrary cycle well defined.

use std::sync::{Arc, OnceLock};

use num::{Signed, Zero};
use thiserror::Error;

use crate::fan::{ConeId, Fan};
use crate::linalg::{
    det_q, inverse_q, mat_vec_q, rank_q, to_qvec, IntVec, LatticeBasis, QMatrix,
    QVec, Rational,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplementError {
    #[error("expected a {expected}x{expected} matrix")]
    WrongShape { expected: usize },
    #[error("gram matrix is not symmetric")]
    NotSymmetric,
    #[error("gram matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("flag vectors do not form a basis")]
    FlagNotBasis,
    #[error("flag is not generic: a flag subspace meets the annihilator of cone {0:?}")]
    NonGenericFlag(Vec<usize>),
    #[error("no subspace given for cone {0:?}")]
    MissingCone(Vec<usize>),
    #[error("two subspaces given for cone {0:?}")]
    DuplicateCone(Vec<usize>),
    #[error("subspace for cone {0:?} has the wrong dimension")]
    WrongDimension(Vec<usize>),
    #[error("subspace for cone {0:?} meets its annihilator")]
    NotComplementary(Vec<usize>),
    #[error("subspace for face {face:?} is not contained in the subspace for {cone:?}")]
    NotNested { face: Vec<usize>, cone: Vec<usize> },
    #[error("{0:?} is not a face of {1:?}")]
    NotAFace(Vec<usize>, Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComplementKind {
    /// `Ψ(σ)` is the orthogonal complement of `σ^⊥` for a positive definite
    /// form on `M_Q` (given by its gram matrix in the dual basis).
    InnerProduct { gram: QMatrix },
    /// `Ψ(σ) = span(f_1, ..., f_{dim σ})`.
    Flag { basis: QMatrix },
    /// A basis of `Ψ(σ)` for every cone, indexed by cone.
    Explicit { subspaces: Vec<Vec<QVec>> },
}

#[derive(Debug, Clone)]
pub struct Complements {
    fan: Arc<Fan>,
    kind: ComplementKind,
    gram_inverse: Option<QMatrix>,
    projections: Vec<OnceLock<QMatrix>>,
}

impl Complements {
    fn build(fan: Arc<Fan>, kind: ComplementKind, gram_inverse: Option<QMatrix>) -> Self {
        let projections = (0..fan.num_cones()).map(|_| OnceLock::new()).collect();
        Self { fan, kind, gram_inverse, projections }
    }

    pub fn inner_product(fan: Arc<Fan>, gram: QMatrix) -> Result<Self, ComplementError> {
        let n = fan.rank();
        if gram.len() != n || gram.iter().any(|r| r.len() != n) {
            return Err(ComplementError::WrongShape { expected: n });
        }
        if (0..n).any(|i| (0..i).any(|j| gram[i][j] != gram[j][i])) {
            return Err(ComplementError::NotSymmetric);
        }
        // Sylvester's criterion.
        for k in 1..=n {
            let minor: QMatrix = gram[..k].iter().map(|r| r[..k].to_vec()).collect();
            if !det_q(&minor).is_positive() {
                return Err(ComplementError::NotPositiveDefinite);
            }
        }
        let inv = inverse_q(&gram).expect("positive definite");
        Ok(Self::build(fan, ComplementKind::InnerProduct { gram }, Some(inv)))
    }

    /// The standard inner product.
    pub fn standard(fan: Arc<Fan>) -> Self {
        let n = fan.rank();
        Self::inner_product(fan, crate::linalg::identity_q(n)).expect("identity is positive definite")
    }

    pub fn flag(fan: Arc<Fan>, basis: QMatrix) -> Result<Self, ComplementError> {
        let n = fan.rank();
        if basis.len() != n || basis.iter().any(|r| r.len() != n) {
            return Err(ComplementError::WrongShape { expected: n });
        }
        if rank_q(&basis, n) != n {
            return Err(ComplementError::FlagNotBasis);
        }
        for c in fan.cone_ids() {
            let k = fan.dim(c);
            let lattice = fan.lattice_of(c);
            let pairing: QMatrix = basis[..k]
                .iter()
                .map(|f| lattice.vectors().iter().map(|b| crate::linalg::dot_qi(f, b)).collect())
                .collect();
            if det_q(&pairing).is_zero() {
                return Err(ComplementError::NonGenericFlag(fan.cone_rays(c).to_vec()));
            }
        }
        Ok(Self::build(fan, ComplementKind::Flag { basis }, None))
    }

    pub fn explicit(fan: Arc<Fan>, subspaces: Vec<(ConeId, Vec<QVec>)>) -> Result<Self, ComplementError> {
        let n = fan.rank();
        let mut slots: Vec<Option<Vec<QVec>>> = vec![None; fan.num_cones()];
        for (c, basis) in subspaces {
            if basis.iter().any(|v| v.len() != n) {
                return Err(ComplementError::WrongShape { expected: n });
            }
            if slots[c.0].replace(basis).is_some() {
                return Err(ComplementError::DuplicateCone(fan.cone_rays(c).to_vec()));
            }
        }
        let subspaces = slots
            .into_iter()
            .enumerate()
            .map(|(i, s)| s.ok_or_else(|| ComplementError::MissingCone(fan.cone_rays(ConeId(i)).to_vec())))
            .collect::<Result<Vec<_>, _>>()?;
        for c in fan.cone_ids() {
            let basis = &subspaces[c.0];
            let rays = fan.cone_rays(c).to_vec();
            if basis.len() != fan.dim(c) || rank_q(basis, n) != basis.len() {
                return Err(ComplementError::WrongDimension(rays));
            }
            let lattice = fan.lattice_of(c);
            let pairing: QMatrix = basis
                .iter()
                .map(|f| lattice.vectors().iter().map(|b| crate::linalg::dot_qi(f, b)).collect())
                .collect();
            if det_q(&pairing).is_zero() {
                return Err(ComplementError::NotComplementary(rays));
            }
            for &face in fan.faces(c) {
                let mut joined = basis.clone();
                joined.extend(subspaces[face.0].iter().cloned());
                if rank_q(&joined, n) != basis.len() {
                    return Err(ComplementError::NotNested {
                        face: fan.cone_rays(face).to_vec(),
                        cone: rays,
                    });
                }
            }
        }
        Ok(Self::build(fan, ComplementKind::Explicit { subspaces }, None))
    }

    pub fn fan(&self) -> &Arc<Fan> {
        &self.fan
    }

    pub fn kind(&self) -> &ComplementKind {
        &self.kind
    }

    /// A basis of `Ψ(σ)`.
    pub fn subspace(&self, sigma: ConeId) -> Vec<QVec> {
        match &self.kind {
            ComplementKind::InnerProduct { .. } => {
                let inv = self.gram_inverse.as_ref().expect("set for inner products");
                self.fan
                    .lattice_of(sigma)
                    .vectors()
                    .iter()
                    .map(|b| mat_vec_q(inv, &to_qvec(b)))
                    .collect()
            }
            ComplementKind::Flag { basis } => basis[..self.fan.dim(sigma)].to_vec(),
            ComplementKind::Explicit { subspaces } => subspaces[sigma.0].clone(),
        }
    }

    /// The same choice written out cone by cone.
    pub fn to_explicit(&self) -> Complements {
        let subspaces = self.fan.cone_ids().map(|c| self.subspace(c)).collect();
        Self::build(self.fan.clone(), ComplementKind::Explicit { subspaces }, None)
    }

    /// Matrix of `π_σ` acting on column vectors.
    pub fn projection_matrix(&self, sigma: ConeId) -> &QMatrix {
        self.projections[sigma.0].get_or_init(|| {
            let n = self.fan.rank();
            let perp: Vec<QVec> = self
                .fan
                .geometry(sigma)
                .orthogonal_lattice()
                .iter()
                .map(|m| to_qvec(m))
                .collect();
            let mut columns = perp.clone();
            columns.extend(self.subspace(sigma));
            let change = crate::linalg::transpose(&columns, n);
            let inv = inverse_q(&change).expect("complement is complementary");
            let q = perp.len();
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|l| {
                            (0..q).fold(Rational::zero(), |acc, j| acc + &perp[j][i] * &inv[j][l])
                        })
                        .collect()
                })
                .collect()
        })
    }

    /// `π_σ(m)`: the component of `m` in `σ^⊥` along `Ψ(σ)`.
    pub fn project(&self, sigma: ConeId, m: &[Rational]) -> QVec {
        mat_vec_q(self.projection_matrix(sigma), m)
    }

    /// The induced map `M_τ → M(σ)_τ` for `σ ≺ τ`, in coordinates dual to a
    /// basis of `N_τ / N_σ` (lifted to `N`).
    pub fn project_between(&self, sigma: ConeId, tau: ConeId, m: &[Rational]) -> Result<QVec, ComplementError> {
        if !self.fan.is_face(sigma, tau) {
            return Err(ComplementError::NotAFace(
                self.fan.cone_rays(sigma).to_vec(),
                self.fan.cone_rays(tau).to_vec(),
            ));
        }
        let p = self.project(sigma, m);
        Ok(relative_basis(&self.fan, sigma, tau)
            .iter()
            .map(|b| crate::linalg::dot_qi(&p, b))
            .collect())
    }
}

/// Lifts to `N` of a basis of `N_τ / N_σ`.
pub(crate) fn relative_basis(fan: &Fan, sigma: ConeId, tau: ConeId) -> Vec<IntVec> {
    let chart = &fan.geometry(sigma).chart;
    let images: Vec<IntVec> = fan.ray_vectors(tau).iter().map(|r| chart.project(r)).collect();
    let (basis, _) = LatticeBasis::from_generators(chart.quotient_rank(), &images).saturation();
    basis.vectors().iter().map(|y| chart.section(y)).collect()
}

