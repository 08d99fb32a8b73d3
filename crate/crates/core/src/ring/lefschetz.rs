use num::Zero;

use super::RingError;
use crate::complements::Complements;
use crate::cycle::Cycle;
use crate::divisor::QCartierDivisor;
use crate::intersection::power;
use crate::linalg::{rank_q, QMatrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LefschetzReport {
    pub i: usize,
    pub exponent: usize,
    /// Number of cones of dimension `n - i` (the target basis).
    pub rows: usize,
    /// Number of cones of dimension `i` (the source basis).
    pub cols: usize,
    pub rank: usize,
    pub injective: bool,
}

/// Rank of `z ↦ ω^{n-2i} z` from cycles on `i`-dimensional cones to cycles
/// on `(n-i)`-dimensional cones, for `ω = Σ a_j D_j`.
pub fn lefschetz_injectivity(
    psi: &Complements,
    coefficients: &[Rational],
    i: usize,
) -> Result<LefschetzReport, RingError> {
    let fan = psi.fan();
    let n = fan.rank();
    if coefficients.len() != fan.num_rays() {
        return Err(RingError::WrongCoefficientCount { expected: fan.num_rays(), found: coefficients.len() });
    }
    if let Some(j) = coefficients.iter().position(Zero::is_zero) {
        return Err(RingError::ZeroCoefficient(j));
    }
    if 2 * i > n {
        return Err(RingError::IndexOutOfRange { i, rank: n });
    }
    if !fan.is_simplicial() {
        return Err(RingError::NotSimplicial);
    }
    let omega = QCartierDivisor::from_ray_coefficients(fan.clone(), coefficients)?;
    let exponent = n - 2 * i;
    let sources = fan.cones_of_dim(i);
    let targets = fan.cones_of_dim(n - i);
    let mut matrix: QMatrix = vec![vec![Rational::zero(); sources.len()]; targets.len()];
    for (col, &sigma) in sources.iter().enumerate() {
        let image = power(&omega, exponent as u32, &Cycle::orbit(fan.clone(), sigma), psi)?;
        for (row, &tau) in targets.iter().enumerate() {
            matrix[row][col] = image.coefficient(tau);
        }
    }
    let rank = rank_q(&matrix, sources.len());
    Ok(LefschetzReport { i, exponent, rows: targets.len(), cols: sources.len(), rank, injective: rank == sources.len() })
}
