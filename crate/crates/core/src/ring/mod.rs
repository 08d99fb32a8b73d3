//! The ring structure on invariant cycles of a simplicial fan.
//!
//! Variable `Y_{i+1}` of a [`Polynomial`] stands for the prime divisor of
//! ray `i` acting on cycles; a polynomial `p` represents `p(D) · [X]`.

mod classes;
mod lefschetz;
mod presentation;

pub use classes::{
    characteristic_class, chern_cycle, linear_span_fraction, q_fraction, todd_cycle, todd_series, ToddCycle,
};
pub use lefschetz::{lefschetz_injectivity, LefschetzReport};
pub use presentation::{
    j_generators, stanley_reisner_generators, verify_presentation, Presentation, PresentationReport,
};

use num::{One, Zero};
use thiserror::Error;

use crate::complements::{ComplementError, Complements};
use crate::cycle::Cycle;
use crate::divisor::{DivisorError, QCartierDivisor};
use crate::fan::Fan;
use crate::intersection::{evaluate_polynomial, localize_coefficient, IntersectionError};
use crate::poly::Polynomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("fan is not simplicial")]
    NotSimplicial,
    #[error("orbit closure of {0:?} has zero coefficient in the product of its rays")]
    InternalZero(Vec<usize>),
    #[error("complements are not induced by an inner product")]
    NotAnInnerProduct,
    #[error("coefficient of ray {0} is zero")]
    ZeroCoefficient(usize),
    #[error("expected {expected} coefficients, found {found}")]
    WrongCoefficientCount { expected: usize, found: usize },
    #[error("Lefschetz index {i} exceeds half the rank {rank}")]
    IndexOutOfRange { i: usize, rank: usize },
    #[error("subset must be a proper subset of 1..={0}")]
    BadSubset(usize),
    #[error("span fractions are only available up to dimension two, got {0}")]
    UnsupportedDimension(usize),
    #[error("angle between the rays is not a rational multiple of a full turn")]
    IrrationalAngle,
    #[error(transparent)]
    Intersection(#[from] IntersectionError),
    #[error(transparent)]
    Complement(#[from] ComplementError),
    #[error(transparent)]
    Divisor(#[from] DivisorError),
}

/// The prime divisors `D_1, ..., D_r` of a simplicial fan.
pub fn prime_divisors(fan: &std::sync::Arc<Fan>) -> Result<Vec<QCartierDivisor>, RingError> {
    if !fan.is_simplicial() {
        return Err(RingError::NotSimplicial);
    }
    (0..fan.num_rays())
        .map(|i| QCartierDivisor::prime(fan.clone(), i).map_err(RingError::from))
        .collect()
}

/// A polynomial in the ray variables whose evaluation on `[X]` is `z`.
pub fn cycle_as_polynomial(z: &Cycle, psi: &Complements) -> Result<Polynomial, RingError> {
    let fan = psi.fan();
    let primes = prime_divisors(fan)?;
    let r = fan.num_rays();
    let mut p = Polynomial::zero(r);
    for (sigma, c) in z.terms() {
        let rays = fan.cone_rays(sigma);
        let divisors: Vec<QCartierDivisor> = rays.iter().map(|&i| primes[i].clone()).collect();
        let scale = localize_coefficient(sigma, fan.zero_cone(), &divisors, psi)?;
        if scale.is_zero() {
            return Err(RingError::InternalZero(rays.to_vec()));
        }
        let mut e = vec![0u32; r];
        for &i in rays {
            e[i] = 1;
        }
        p.add_term(e, c / scale);
    }
    Ok(p)
}

/// `z_1 · z_2`, computed as `p_1(D) · z_2` where `p_1(D) · [X] = z_1`.
pub fn product(z1: &Cycle, z2: &Cycle, psi: &Complements) -> Result<Cycle, RingError> {
    let p = cycle_as_polynomial(z1, psi)?;
    let primes = prime_divisors(psi.fan())?;
    Ok(evaluate_polynomial(&p, &primes, z2, psi)?)
}

/// `p(D_1, ..., D_r) · [X]`.
pub fn evaluate_on_fundamental(p: &Polynomial, psi: &Complements) -> Result<Cycle, RingError> {
    let primes = prime_divisors(psi.fan())?;
    Ok(evaluate_polynomial(p, &primes, &Cycle::fundamental(psi.fan().clone()), psi)?)
}

/// The square-free monomial `Y_σ`.
pub(crate) fn face_monomial(r: usize, rays: &[usize]) -> Polynomial {
    let mut e = vec![0u32; r];
    for &i in rays {
        e[i] = 1;
    }
    Polynomial::monomial(r, e, num::BigRational::one())
}

#[cfg(test)]
mod tests;
