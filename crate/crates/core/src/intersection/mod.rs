//! The action of Q-Cartier divisors on torus-invariant cycles.
//!
//! For `D` with local equations `m_τ` and a choice of complements `Ψ`,
//! `D · [V(σ)] = Σ_{τ ⊃ σ facet} ⟨π_σ(m_τ), n_{τ,σ}⟩ [V(τ)]`, extended linearly.

mod chains;
mod flag;

pub use chains::{dn_volume_decomposition, ChainTerm, VolumeDecomposition};
pub use flag::{
    flag_closed_form, flag_normal, flag_simplex_coefficient, normal_coordinates,
    symbolic_flag_coefficient, SignedSimplex,
};

use std::collections::HashMap;
use std::sync::Arc;

use num::{One, Zero};
use thiserror::Error;

use crate::complements::{ComplementError, Complements};
use crate::cycle::{same_fan, Cycle};
use crate::divisor::QCartierDivisor;
use crate::fan::{build_fan, ConeId, Fan, FanError};
use crate::linalg::{dot_qi, IntVec, QVec, Rational};
use crate::par::Exec;
use crate::poly::{Monomial, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntersectionError {
    #[error("objects live on different fans")]
    FanMismatch,
    #[error("polynomial has {found} variables but {expected} divisors were given")]
    WrongArity { expected: usize, found: usize },
    #[error("divisor does not meet V({0:?}) properly")]
    NotProper(Vec<usize>),
    #[error("{0:?} is not a face of {1:?}")]
    NotAFace(Vec<usize>, Vec<usize>),
    #[error("cone {0:?} is not full-dimensional")]
    NotFullDimensional(Vec<usize>),
    #[error("cone {0:?} is not simplicial")]
    NotSimplicial(Vec<usize>),
    #[error("complements are not given by a flag")]
    NotAFlag,
    #[error("flag is not generic for cone {0:?}")]
    NonGenericFlag(Vec<usize>),
    #[error("polynomial is not homogeneous of degree {0}")]
    NotHomogeneous(usize),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Complement(#[from] ComplementError),
}

fn check_fans(fans: &[&Arc<Fan>]) -> Result<(), IntersectionError> {
    if fans.windows(2).all(|w| same_fan(w[0], w[1])) {
        Ok(())
    } else {
        Err(IntersectionError::FanMismatch)
    }
}

/// `D · z`.
pub fn intersect(d: &QCartierDivisor, z: &Cycle, psi: &Complements) -> Result<Cycle, IntersectionError> {
    intersect_with(Exec::default(), d, z, psi)
}

pub fn intersect_with(
    exec: Exec,
    d: &QCartierDivisor,
    z: &Cycle,
    psi: &Complements,
) -> Result<Cycle, IntersectionError> {
    check_fans(&[d.fan(), z.fan(), psi.fan()])?;
    let fan = z.fan();
    let terms: Vec<(ConeId, Rational)> = z.terms().map(|(c, q)| (c, q.clone())).collect();
    let parts = exec.map(&terms, |(sigma, c)| {
        fan.geometry(*sigma)
            .over
            .iter()
            .map(|(tau, lift)| {
                let p = psi.project(*sigma, d.local_equation(*tau));
                (*tau, c * dot_qi(&p, lift))
            })
            .collect::<Vec<_>>()
    });
    Ok(Cycle::from_terms(fan.clone(), parts.into_iter().flatten()))
}

/// Whether the local equation of `D` near `σ` lies in `σ^⊥`.
pub fn intersects_properly(d: &QCartierDivisor, sigma: ConeId) -> bool {
    let fan = d.fan();
    let m = d.local_equation(sigma);
    fan.cone_rays(sigma).iter().all(|&i| dot_qi(m, fan.ray(i)).is_zero())
}

/// `D|_{V(σ)}` computed without any complement, for `D` meeting `V(σ)` properly.
pub fn proper_restriction_cycle(d: &QCartierDivisor, sigma: ConeId) -> Result<Cycle, IntersectionError> {
    let fan = d.fan();
    if !intersects_properly(d, sigma) {
        return Err(IntersectionError::NotProper(fan.cone_rays(sigma).to_vec()));
    }
    Ok(Cycle::from_terms(
        fan.clone(),
        fan.geometry(sigma)
            .over
            .iter()
            .map(|(tau, lift)| (*tau, dot_qi(d.local_equation(*tau), lift))),
    ))
}

/// `p(E_1, ..., E_s) · z`, variable `i` standing for `divisors[i]`.
pub fn evaluate_polynomial(
    p: &Polynomial,
    divisors: &[QCartierDivisor],
    z: &Cycle,
    psi: &Complements,
) -> Result<Cycle, IntersectionError> {
    evaluate_polynomial_with(Exec::default(), p, divisors, z, psi)
}

/// The monomial one factor shorter, and the variable that was removed.
fn parent(e: &Monomial) -> Option<(Monomial, usize)> {
    let i = e.iter().position(|&k| k > 0)?;
    let mut p = e.clone();
    p[i] -= 1;
    Some((p, i))
}

pub fn evaluate_polynomial_with(
    exec: Exec,
    p: &Polynomial,
    divisors: &[QCartierDivisor],
    z: &Cycle,
    psi: &Complements,
) -> Result<Cycle, IntersectionError> {
    if p.nvars() != divisors.len() {
        return Err(IntersectionError::WrongArity { expected: divisors.len(), found: p.nvars() });
    }
    for d in divisors {
        check_fans(&[d.fan(), z.fan(), psi.fan()])?;
    }
    check_fans(&[z.fan(), psi.fan()])?;
    // Every monomial is computed from its parent, one divisor at a time,
    // one degree level at a time.
    let mut levels: Vec<Vec<Monomial>> = Vec::new();
    for (e, _) in p.terms() {
        let mut cur = e.clone();
        loop {
            let deg = cur.iter().sum::<u32>() as usize;
            if levels.len() <= deg {
                levels.resize(deg + 1, Vec::new());
            }
            if levels[deg].contains(&cur) {
                break;
            }
            levels[deg].push(cur.clone());
            match parent(&cur) {
                Some((q, _)) => cur = q,
                None => break,
            }
        }
    }
    let mut memo: HashMap<Monomial, Cycle> = HashMap::new();
    memo.insert(vec![0; p.nvars()], z.clone());
    for level in levels.iter().skip(1) {
        let computed = exec.map(level, |e| {
            let (q, i) = parent(e).expect("positive degree");
            intersect_with(Exec::Sequential, &divisors[i], &memo[&q], psi)
        });
        for (e, c) in level.iter().zip(computed) {
            memo.insert(e.clone(), c?);
        }
    }
    debug_assert!(reversed_order_agrees(p, divisors, z, psi, &memo));
    let mut out = Cycle::zero(z.fan().clone());
    for (e, c) in p.terms() {
        out.add_cycle(&memo[e].scaled(c));
    }
    Ok(out)
}

/// Recomputes the highest monomial applying its factors in the opposite order.
fn reversed_order_agrees(
    p: &Polynomial,
    divisors: &[QCartierDivisor],
    z: &Cycle,
    psi: &Complements,
    memo: &HashMap<Monomial, Cycle>,
) -> bool {
    let Some((e, _)) = p.terms().max_by_key(|(e, _)| e.iter().sum::<u32>()) else {
        return true;
    };
    let mut cur = z.clone();
    for i in (0..e.len()).rev() {
        for _ in 0..e[i] {
            cur = intersect_with(Exec::Sequential, &divisors[i], &cur, psi).expect("checked above");
        }
    }
    cur == memo[e]
}

/// `D^k · z`.
pub fn power(d: &QCartierDivisor, k: u32, z: &Cycle, psi: &Complements) -> Result<Cycle, IntersectionError> {
    let mut cur = z.clone();
    for _ in 0..k {
        cur = intersect(d, &cur, psi)?;
    }
    Ok(cur)
}

/// The coefficient of `[V(τ)]` in `E_1 ⋯ E_s · [V(σ)]`, computed on the
/// affine fan of the faces of `τ` in the lattice `N_τ`, with the local
/// equations and complements restricted to `N_τ`.
pub fn localize_coefficient(
    tau: ConeId,
    sigma: ConeId,
    divisors: &[QCartierDivisor],
    psi: &Complements,
) -> Result<Rational, IntersectionError> {
    let fan = psi.fan();
    for d in divisors {
        check_fans(&[d.fan(), fan])?;
    }
    if !fan.is_face(sigma, tau) {
        return Err(IntersectionError::NotAFace(
            fan.cone_rays(sigma).to_vec(),
            fan.cone_rays(tau).to_vec(),
        ));
    }
    if fan.dim(tau) - fan.dim(sigma) != divisors.len() {
        return Ok(Rational::zero());
    }
    let local = LocalChart::new(fan, tau);
    let restrict = |m: &[Rational]| -> QVec { local.basis.iter().map(|b| dot_qi(m, b)).collect() };
    let equations: Vec<QVec> = divisors.iter().map(|d| restrict(d.local_equation(tau))).collect();
    let subspaces = local
        .fan
        .cone_ids()
        .map(|c| {
            let global = local.global(fan, c);
            (c, psi.subspace(global).iter().map(|v| restrict(v)).collect())
        })
        .collect();
    let local_psi = Complements::explicit(Arc::new(local.fan.clone()), subspaces)?;
    let start = local.local(fan, sigma);
    let top = *local.fan.maximal_cones().first().expect("affine fan has a top cone");
    Ok(chain_sum(&local.fan, &local_psi, &equations, start, top))
}

/// Σ over saturated chains from `start` to `top` of the product of pairings,
/// applying the last equation first.
fn chain_sum(fan: &Fan, psi: &Complements, equations: &[QVec], start: ConeId, top: ConeId) -> Rational {
    let Some((m, rest)) = equations.split_last() else {
        return if start == top { Rational::one() } else { Rational::zero() };
    };
    let projected = psi.project(start, m);
    fan.geometry(start)
        .over
        .iter()
        .filter(|(gamma, _)| fan.is_face(*gamma, top))
        .map(|(gamma, lift)| dot_qi(&projected, lift) * chain_sum(fan, psi, rest, *gamma, top))
        .fold(Rational::zero(), |acc, x| acc + x)
}

/// The affine fan of a cone's faces, in coordinates on its saturated lattice.
struct LocalChart {
    fan: Fan,
    basis: Vec<IntVec>,
    rays: Vec<usize>,
}

impl LocalChart {
    fn new(fan: &Fan, tau: ConeId) -> Self {
        let lattice = fan.lattice_of(tau);
        let d = lattice.rank();
        let rays = fan.cone_rays(tau).to_vec();
        let local_rays: Vec<IntVec> = rays
            .iter()
            .map(|&i| {
                let c = lattice
                    .coordinates(&crate::linalg::to_qvec(fan.ray(i)))
                    .expect("ray lies in its cone's lattice");
                crate::linalg::to_int_vec(&c).expect("saturated lattice contains the rays")
            })
            .collect();
        let local = build_fan(d, local_rays, vec![(0..rays.len()).collect()])
            .expect("the faces of a cone form a fan");
        Self { fan: local, basis: lattice.vectors().to_vec(), rays }
    }

    fn global(&self, fan: &Fan, c: ConeId) -> ConeId {
        let set: Vec<usize> = self.fan.cone_rays(c).iter().map(|&i| self.rays[i]).collect();
        fan.cone_by_rays(&set).expect("faces of a cone are cones")
    }

    fn local(&self, fan: &Fan, c: ConeId) -> ConeId {
        let set: Vec<usize> = fan
            .cone_rays(c)
            .iter()
            .map(|r| self.rays.iter().position(|x| x == r).expect("face of the local cone"))
            .collect();
        self.fan.cone_by_rays(&set).expect("faces of a cone are cones")
    }
}

#[cfg(test)]
mod tests;
