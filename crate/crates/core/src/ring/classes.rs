//! Characteristic-class cycles and the span fractions that describe the
//! Todd cycle of projective space.

use num::{FromPrimitive, One, Signed, Zero};

use super::{evaluate_on_fundamental, prime_divisors, RingError};
use crate::complements::Complements;
use crate::cycle::Cycle;
use crate::fan::{ConeId, Fan};
use crate::intersection::intersect;
use crate::linalg::{dot, inverse_q, mat_vec_q, to_qvec, QMatrix, Rational};
use crate::poly::Polynomial;

/// Coefficients `b_0, ..., b_n` of `x / (1 - e^{-x})`, by inverting the
/// series `(1 - e^{-x}) / x = Σ (-1)^k x^k / (k+1)!`.
pub fn todd_series(n: usize) -> Vec<Rational> {
    let mut factorial = Rational::one();
    let f: Vec<Rational> = (0..=n)
        .map(|k| {
            factorial *= Rational::from_usize(k + 1).expect("small");
            let sign = if k % 2 == 0 { Rational::one() } else { -Rational::one() };
            sign / &factorial
        })
        .collect();
    let mut g: Vec<Rational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m == 0 {
            g.push(f[0].recip());
            continue;
        }
        let s = (1..=m).fold(Rational::zero(), |acc, j| acc + &f[j] * &g[m - j]);
        g.push(-s / &f[0]);
    }
    g
}

#[derive(Debug, Clone, PartialEq)]
pub struct ToddCycle {
    pub cycle: Cycle,
    /// Sum of the coefficients on maximal-dimensional cones.
    pub top_degree: Rational,
    /// Set on singular fans, where `∏ Φ(D_i)` is evaluated as a formula only.
    pub formula_extension: bool,
}

/// `∏_i Φ(D_i) · [X]` with `Φ(x) = x / (1 - e^{-x})`; powers beyond the
/// rank act as zero.
pub fn todd_cycle(psi: &Complements) -> Result<ToddCycle, RingError> {
    let fan = psi.fan();
    let primes = prime_divisors(fan)?;
    let n = fan.rank();
    let series = todd_series(n);
    let mut z = Cycle::fundamental(fan.clone());
    for d in &primes {
        let mut acc = z.clone();
        let mut power = z;
        for b in &series[1..] {
            power = intersect(d, &power, psi)?;
            if power.is_zero() {
                break;
            }
            acc.add_cycle(&power.scaled(b));
        }
        z = acc;
    }
    let top_degree = z.codimension_part(n).terms().fold(Rational::zero(), |acc, (_, q)| acc + q);
    Ok(ToddCycle { cycle: z, top_degree, formula_extension: !fan.is_smooth() })
}

/// The codimension-`j` part of `∏_i (1 + D_i) · [X]`.
pub fn chern_cycle(psi: &Complements, j: usize) -> Result<Cycle, RingError> {
    let fan = psi.fan();
    let primes = prime_divisors(fan)?;
    let mut z = Cycle::fundamental(fan.clone());
    for d in &primes {
        let next = intersect(d, &z, psi)?;
        z.add_cycle(&next);
    }
    Ok(z.codimension_part(j))
}

/// `p(D_1, ..., D_r) · [X]`.
pub fn characteristic_class(p: &Polynomial, psi: &Complements) -> Result<Cycle, RingError> {
    evaluate_on_fundamental(p, psi)
}

/// `∏ 1/(|T| + 1)` over the maximal cyclic runs `T` of `subset ⊂ {1, ..., m}`.
pub fn q_fraction(subset: &[usize], m: usize) -> Result<Rational, RingError> {
    let mut member = vec![false; m];
    for &i in subset {
        if i == 0 || i > m || member[i - 1] {
            return Err(RingError::BadSubset(m));
        }
        member[i - 1] = true;
    }
    if subset.len() >= m {
        return Err(RingError::BadSubset(m));
    }
    let mut q = Rational::one();
    for start in 0..m {
        // A run starts where the cyclic predecessor is absent.
        if !member[start] || member[(start + m - 1) % m] {
            continue;
        }
        let len = (0..m).take_while(|k| member[(start + k) % m]).count();
        q /= Rational::from_usize(len + 1).expect("small");
    }
    Ok(q)
}

/// The fraction of `span(σ)` occupied by `σ`, measuring angles in `N_Q` with
/// the inner product dual to `gram`.
///
/// In dimension two the fraction is `θ / 2π`; it is rational exactly when
/// `cos²θ ∈ {0, 1/4, 1/2, 3/4}`, which is decided without leaving `Q`.
pub fn linear_span_fraction(fan: &Fan, sigma: ConeId, gram: &QMatrix) -> Result<Rational, RingError> {
    let q = |a: i64, b: i64| Rational::new(a.into(), b.into());
    match fan.dim(sigma) {
        0 => Ok(Rational::one()),
        1 => Ok(q(1, 2)),
        2 => {
            let dual = inverse_q(gram)
                .map_err(|_| RingError::Complement(crate::complements::ComplementError::NotPositiveDefinite))?;
            let rays: Vec<_> = fan.ray_vectors(sigma).iter().map(|v| to_qvec(v)).collect();
            let pair = |a: &[Rational], b: &[Rational]| dot(a, &mat_vec_q(&dual, b));
            let c = pair(&rays[0], &rays[1]);
            let cos2 = &c * &c / (pair(&rays[0], &rays[0]) * pair(&rays[1], &rays[1]));
            let acute = !c.is_negative();
            let turns = if cos2.is_zero() {
                q(1, 4)
            } else if cos2 == q(1, 4) {
                if acute { q(1, 6) } else { q(1, 3) }
            } else if cos2 == q(1, 2) {
                if acute { q(1, 8) } else { q(3, 8) }
            } else if cos2 == q(3, 4) {
                if acute { q(1, 12) } else { q(5, 12) }
            } else {
                return Err(RingError::IrrationalAngle);
            };
            Ok(turns)
        }
        k => Err(RingError::UnsupportedDimension(k)),
    }
}

