//! Closed forms for complements taken from a flag `f_1, ..., f_n` of `M_Q`.
//!
//! For a cone `σ` of dimension `k` the flag picks out a normal vector
//! `w ∈ span(σ)` with `⟨f_i, w⟩ = 0` for `i < k` and `⟨f_k, w⟩ = 1`. On a
//! simplicial `σ` every coefficient of `q(E_1, ..., E_s) · [X]` at `[V(σ)]`
//! is a ratio of `q` evaluated at `⟨m_i, w⟩` and the pairings of `w` with
//! the dual basis of the rays.

use num::{FromPrimitive, One, Signed, Zero};

use super::{check_fans, IntersectionError};
use crate::complements::{ComplementKind, Complements};
use crate::divisor::QCartierDivisor;
use crate::fan::{ConeId, Fan};
use crate::linalg::{dot, dot_qi, solve_rational, to_qvec, QMatrix, QVec, Rational};
use crate::poly::{Polynomial, RationalFunction};
use crate::polytope::lattice_volume;

/// The flag normal of `σ`, or `None` if the flag is not generic for `σ`.
pub fn flag_normal(fan: &Fan, flag: &QMatrix, sigma: ConeId) -> Option<QVec> {
    let k = fan.dim(sigma);
    if k == 0 {
        return None;
    }
    let lattice = fan.lattice_of(sigma);
    let pairing: QMatrix = flag[..k]
        .iter()
        .map(|f| lattice.vectors().iter().map(|b| dot_qi(f, b)).collect())
        .collect();
    let mut rhs = vec![Rational::zero(); k];
    rhs[k - 1] = Rational::one();
    let (c, kernel) = solve_rational(&pairing, &rhs, k).ok()?;
    if !kernel.is_empty() {
        return None;
    }
    let mut w = vec![Rational::zero(); fan.rank()];
    for (cj, b) in c.iter().zip(lattice.vectors()) {
        for (wi, bi) in w.iter_mut().zip(b) {
            *wi += cj * Rational::from_integer(bi.clone());
        }
    }
    Some(w)
}

/// Coordinates of `w ∈ span(σ)` in the basis of `N_σ` used by
/// [`symbolic_flag_coefficient`].
pub fn normal_coordinates(fan: &Fan, sigma: ConeId, w: &[Rational]) -> Option<QVec> {
    fan.lattice_of(sigma).coordinates(w)
}

/// Coordinates of `w ∈ span(σ)` in the ray basis of a simplicial `σ`,
/// i.e. the pairings `⟨u_i, w⟩` with the dual basis.
fn ray_coordinates(fan: &Fan, sigma: ConeId, w: &[Rational]) -> QVec {
    let rays = fan.ray_vectors(sigma);
    let a: QMatrix = (0..fan.rank())
        .map(|r| rays.iter().map(|v| Rational::from_integer(v[r].clone())).collect())
        .collect();
    let (c, _) = solve_rational(&a, w, rays.len()).expect("w lies in the span of σ");
    c
}

fn flag_of(psi: &Complements) -> Result<&QMatrix, IntersectionError> {
    match psi.kind() {
        ComplementKind::Flag { basis } => Ok(basis),
        _ => Err(IntersectionError::NotAFlag),
    }
}

fn simplicial_or_err(fan: &Fan, sigma: ConeId) -> Result<(), IntersectionError> {
    if fan.cone(sigma).is_simplicial() {
        Ok(())
    } else {
        Err(IntersectionError::NotSimplicial(fan.cone_rays(sigma).to_vec()))
    }
}

/// The simplex cut from the cone of `ρ_i^⊥` hyperplanes by the hyperplane
/// through `m_σ` with normal `w`, with its orientation sign.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedSimplex {
    /// The origin, then one vertex on each edge line `R·u_i`.
    pub vertices: Vec<QVec>,
    pub volume: Rational,
    /// `(-1)^(number of vertices on the negative half of their edge line)`.
    pub sign: i8,
    /// `sign · n! · volume`.
    pub value: Rational,
}

pub fn flag_simplex_coefficient(
    d: &QCartierDivisor,
    sigma: ConeId,
    psi: &Complements,
) -> Result<SignedSimplex, IntersectionError> {
    check_fans(&[d.fan(), psi.fan()])?;
    let fan = d.fan();
    let n = fan.rank();
    if fan.dim(sigma) != n {
        return Err(IntersectionError::NotFullDimensional(fan.cone_rays(sigma).to_vec()));
    }
    simplicial_or_err(fan, sigma)?;
    let rays = fan.cone_rays(sigma).to_vec();
    let w = flag_normal(fan, flag_of(psi)?, sigma).ok_or(IntersectionError::NonGenericFlag(rays.clone()))?;
    let level = dot(d.local_equation(sigma), &w);
    // u_i: dual basis to the rays, so ⟨u_i, w⟩ is the i-th ray coordinate of w.
    let ray_matrix: QMatrix = fan.ray_vectors(sigma).iter().map(|v| to_qvec(v)).collect();
    let duals = crate::linalg::transpose(&crate::linalg::inverse_q(&ray_matrix).expect("full rank"), n);
    let pairings = ray_coordinates(fan, sigma, &w);
    if pairings.iter().any(|p| p.is_zero()) {
        return Err(IntersectionError::NonGenericFlag(rays));
    }
    let mut vertices = vec![vec![Rational::zero(); n]];
    let mut negative = 0usize;
    for (u, p) in duals.iter().zip(&pairings) {
        let t = &level / p;
        if t.is_negative() {
            negative += 1;
        }
        vertices.push(u.iter().map(|x| x * &t).collect());
    }
    let volume = lattice_volume(&vertices);
    let sign: i8 = if negative % 2 == 0 { 1 } else { -1 };
    let fact = (1..=n).fold(Rational::one(), |acc, k| acc * Rational::from_usize(k).expect("small"));
    let value = &fact * &volume * Rational::from_integer(sign.into());
    Ok(SignedSimplex { vertices, volume, sign, value })
}

fn check_arity(q: &Polynomial, divisors: &[QCartierDivisor], k: usize) -> Result<(), IntersectionError> {
    if q.nvars() != divisors.len() {
        return Err(IntersectionError::WrongArity { expected: divisors.len(), found: q.nvars() });
    }
    if !q.is_zero() && !q.is_homogeneous(k as u32) {
        return Err(IntersectionError::NotHomogeneous(k));
    }
    Ok(())
}

/// The coefficient of `[V(σ)]` in `q(E_1, ..., E_s) · [X]` for a homogeneous
/// `q` of degree `dim σ`, read off from the flag normal of `σ`.
pub fn flag_closed_form(
    q: &Polynomial,
    divisors: &[QCartierDivisor],
    sigma: ConeId,
    psi: &Complements,
) -> Result<Rational, IntersectionError> {
    for d in divisors {
        check_fans(&[d.fan(), psi.fan()])?;
    }
    let fan = psi.fan();
    let k = fan.dim(sigma);
    check_arity(q, divisors, k)?;
    simplicial_or_err(fan, sigma)?;
    if k == 0 {
        return Ok(q.coefficient(&vec![0; q.nvars()]));
    }
    let rays = fan.cone_rays(sigma).to_vec();
    let w = flag_normal(fan, flag_of(psi)?, sigma).ok_or(IntersectionError::NonGenericFlag(rays.clone()))?;
    let pairings = ray_coordinates(fan, sigma, &w);
    if pairings.iter().any(|p| p.is_zero()) {
        return Err(IntersectionError::NonGenericFlag(rays));
    }
    let values: QVec = divisors.iter().map(|d| dot(d.local_equation(sigma), &w)).collect();
    let denominator = pairings
        .iter()
        .fold(Rational::from_integer(fan.multiplicity(sigma)), |acc, p| acc * p);
    Ok(q.evaluate(&values) / denominator)
}

/// The same coefficient as a rational function of the coordinates of the
/// normal `w` in the basis of `N_σ`, valid for every generic flag.
pub fn symbolic_flag_coefficient(
    q: &Polynomial,
    divisors: &[QCartierDivisor],
    sigma: ConeId,
) -> Result<RationalFunction, IntersectionError> {
    let Some(first) = divisors.first() else {
        return Err(IntersectionError::WrongArity { expected: q.nvars(), found: 0 });
    };
    let fan = first.fan();
    for d in divisors {
        check_fans(&[d.fan(), fan])?;
    }
    let k = fan.dim(sigma);
    check_arity(q, divisors, k)?;
    simplicial_or_err(fan, sigma)?;
    let lattice = fan.lattice_of(sigma);
    let basis = lattice.vectors();
    let forms: Vec<Polynomial> = divisors
        .iter()
        .map(|d| {
            let m = d.local_equation(sigma);
            Polynomial::linear(&basis.iter().map(|b| dot_qi(m, b)).collect::<Vec<_>>())
        })
        .collect();
    let numerator = if k == 0 { Polynomial::constant(0, q.coefficient(&vec![0; q.nvars()])) } else { q.compose(&forms) };
    // Row j: ray coordinates of b_j; column i gives ⟨u_i, ·⟩ on the basis.
    let coords: Vec<QVec> = basis.iter().map(|b| ray_coordinates(fan, sigma, &to_qvec(b))).collect();
    let mult = Rational::from_integer(fan.multiplicity(sigma));
    let factors: Vec<Polynomial> = (0..k)
        .map(|i| {
            let form = Polynomial::linear(&coords.iter().map(|c| c[i].clone()).collect::<Vec<_>>());
            if i == 0 {
                form.scale(&mult)
            } else {
                form
            }
        })
        .collect();
    Ok(RationalFunction::from_factors(numerator, &factors))
}
