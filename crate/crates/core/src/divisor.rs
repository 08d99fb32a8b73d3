//! Q-Cartier torus-invariant divisors given by local equations on maximal cones.

use std::sync::Arc;

use num::{One, Zero};
use thiserror::Error;

use crate::cycle::{same_fan, Cycle};
use crate::fan::{ConeId, Fan};
use crate::linalg::{
    dot, dot_qi, mat_vec_q, solve_rational, to_qmatrix, transpose, QMatrix, QVec, Rational,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DivisorError {
    #[error("local equation has {found} coordinates, expected {expected}")]
    WrongLength { expected: usize, found: usize },
    #[error("cone {0:?} is not maximal")]
    NotMaximal(Vec<usize>),
    #[error("no local equation given on maximal cone {0:?}")]
    MissingCone(Vec<usize>),
    #[error("two local equations given on cone {0:?}")]
    DuplicateCone(Vec<usize>),
    #[error("local equations on {first:?} and {second:?} disagree on their common face {shared:?}")]
    AgreementViolation { first: Vec<usize>, second: Vec<usize>, shared: Vec<usize> },
    #[error("expected {expected} ray coefficients, found {found}")]
    WrongCoefficientCount { expected: usize, found: usize },
    #[error("cone {0:?} is not simplicial")]
    NotSimplicial(Vec<usize>),
    #[error("objects live on different fans")]
    FanMismatch,
    #[error("the fan is not complete")]
    NotComplete,
    #[error("local equations do not correspond to the vertices of a polytope")]
    NoPolytope,
    #[error("cycle has a term on cone {0:?}, which is not of full dimension")]
    NotZeroDimensional(Vec<usize>),
}

/// A Q-Cartier divisor: one `m_σ ∈ M_Q` per maximal cone, with
/// `m_σ - m_σ'` vanishing on `σ ∩ σ'`. `χ^{m_σ}` cuts out the divisor near `σ`.
#[derive(Clone, Debug)]
pub struct QCartierDivisor {
    fan: Arc<Fan>,
    /// Indexed parallel to `fan.maximal_cones()`.
    local: Vec<QVec>,
}

/// Equality of the divisors, not of the representatives: local equations
/// may differ by elements of `σ^⊥` on each maximal cone `σ`.
impl PartialEq for QCartierDivisor {
    fn eq(&self, other: &Self) -> bool {
        same_fan(&self.fan, &other.fan)
            && self.fan.maximal_cones().iter().enumerate().all(|(k, &c)| {
                let diff: QVec = self.local[k].iter().zip(&other.local[k]).map(|(x, y)| x - y).collect();
                self.fan.cone_rays(c).iter().all(|&i| dot_qi(&diff, self.fan.ray(i)).is_zero())
            })
    }
}

impl QCartierDivisor {
    /// Local equations listed per maximal cone, in any order.
    pub fn new(fan: Arc<Fan>, equations: Vec<(ConeId, QVec)>) -> Result<Self, DivisorError> {
        let maximal = fan.maximal_cones().to_vec();
        let mut local: Vec<Option<QVec>> = vec![None; maximal.len()];
        for (c, m) in equations {
            let slot = maximal
                .iter()
                .position(|&x| x == c)
                .ok_or_else(|| DivisorError::NotMaximal(fan.cone_rays(c).to_vec()))?;
            if local[slot].is_some() {
                return Err(DivisorError::DuplicateCone(fan.cone_rays(c).to_vec()));
            }
            local[slot] = Some(m);
        }
        let local = local
            .into_iter()
            .zip(&maximal)
            .map(|(m, &c)| m.ok_or_else(|| DivisorError::MissingCone(fan.cone_rays(c).to_vec())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_maximal(fan, local)
    }

    /// Local equations in the order of `fan.maximal_cones()`.
    pub fn from_maximal(fan: Arc<Fan>, local: Vec<QVec>) -> Result<Self, DivisorError> {
        assert_eq!(local.len(), fan.maximal_cones().len(), "one equation per maximal cone");
        if let Some(m) = local.iter().find(|m| m.len() != fan.rank()) {
            return Err(DivisorError::WrongLength { expected: fan.rank(), found: m.len() });
        }
        let d = Self { fan, local };
        d.validate()?;
        Ok(d)
    }

    fn validate(&self) -> Result<(), DivisorError> {
        let fan = &self.fan;
        let maximal = fan.maximal_cones();
        for i in 0..maximal.len() {
            for j in i + 1..maximal.len() {
                let a = fan.cone_rays(maximal[i]);
                let b = fan.cone_rays(maximal[j]);
                let shared: Vec<usize> = a.iter().copied().filter(|r| b.contains(r)).collect();
                let diff: QVec = self.local[i].iter().zip(&self.local[j]).map(|(x, y)| x - y).collect();
                if shared.iter().any(|&r| !dot_qi(&diff, fan.ray(r)).is_zero()) {
                    return Err(DivisorError::AgreementViolation {
                        first: a.to_vec(),
                        second: b.to_vec(),
                        shared,
                    });
                }
            }
        }
        Ok(())
    }

    /// The principal divisor of `χ^m`: the same equation on every cone.
    pub fn principal(fan: Arc<Fan>, m: QVec) -> Self {
        let local = vec![m; fan.maximal_cones().len()];
        Self { fan, local }
    }

    /// The divisor `Σ c_i D_i` on a fan whose maximal cones are simplicial.
    ///
    /// On each maximal cone the equation is the unique solution of
    /// `⟨m, v_i⟩ = c_i` lying in the span of the cone's rays.
    pub fn from_ray_coefficients(fan: Arc<Fan>, coefficients: &[Rational]) -> Result<Self, DivisorError> {
        if coefficients.len() != fan.num_rays() {
            return Err(DivisorError::WrongCoefficientCount {
                expected: fan.num_rays(),
                found: coefficients.len(),
            });
        }
        let n = fan.rank();
        let mut local = Vec::new();
        for &c in fan.maximal_cones() {
            if !fan.cone(c).is_simplicial() {
                return Err(DivisorError::NotSimplicial(fan.cone_rays(c).to_vec()));
            }
            let v: QMatrix = to_qmatrix(&fan.ray_vectors(c));
            let gram: QMatrix = v.iter().map(|a| v.iter().map(|b| dot(a, b)).collect()).collect();
            let rhs: QVec = fan.cone_rays(c).iter().map(|&i| coefficients[i].clone()).collect();
            let (a, _) = solve_rational(&gram, &rhs, v.len()).expect("rays of a simplicial cone are independent");
            local.push(mat_vec_q(&transpose(&v, n), &a));
        }
        Ok(Self { fan, local })
    }

    /// The prime divisor `D_i`.
    pub fn prime(fan: Arc<Fan>, i: usize) -> Result<Self, DivisorError> {
        let mut c = vec![Rational::zero(); fan.num_rays()];
        c[i] = Rational::one();
        Self::from_ray_coefficients(fan, &c)
    }

    pub fn fan(&self) -> &Arc<Fan> {
        &self.fan
    }

    /// The equation of a maximal cone containing `tau`; well defined modulo `τ^⊥`.
    pub fn local_equation(&self, tau: ConeId) -> &QVec {
        let home = self.fan.home(tau);
        let slot = self
            .fan
            .maximal_cones()
            .iter()
            .position(|&c| c == home)
            .expect("home is maximal");
        &self.local[slot]
    }

    /// Equations in the order of `fan.maximal_cones()`.
    pub fn maximal_equations(&self) -> &[QVec] {
        &self.local
    }

    /// `⟨m_ρ, v_ρ⟩` for every ray.
    pub fn ray_coefficients(&self) -> QVec {
        (0..self.fan.num_rays())
            .map(|i| dot_qi(self.local_equation(self.fan.ray_cone(i)), self.fan.ray(i)))
            .collect()
    }

    pub fn sum(&self, other: &Self) -> Result<Self, DivisorError> {
        if !same_fan(&self.fan, &other.fan) {
            return Err(DivisorError::FanMismatch);
        }
        let local = self
            .local
            .iter()
            .zip(&other.local)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        Ok(Self { fan: self.fan.clone(), local })
    }

    pub fn scaled(&self, q: &Rational) -> Self {
        let local = self.local.iter().map(|m| m.iter().map(|x| x * q).collect()).collect();
        Self { fan: self.fan.clone(), local }
    }
}

/// The Weil divisor `Σ ⟨m_ρ, v_ρ⟩ [V(ρ)]` of `D`.
pub fn divisor_cycle(d: &QCartierDivisor) -> Cycle {
    let fan = d.fan().clone();
    let coefficients = d.ray_coefficients();
    Cycle::from_terms(
        fan.clone(),
        coefficients.into_iter().enumerate().map(|(i, q)| (fan.ray_cone(i), q)),
    )
}

/// Sum of the coefficients of a cycle supported on full-dimensional cones.
pub fn degree(z: &Cycle) -> Result<Rational, DivisorError> {
    let fan = z.fan();
    let mut total = Rational::zero();
    for (c, q) in z.terms() {
        if fan.dim(c) != fan.rank() {
            return Err(DivisorError::NotZeroDimensional(fan.cone_rays(c).to_vec()));
        }
        total += q;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::build_fan;
    use crate::fixtures::{affine_space, projective_space};
    use crate::linalg::{int, rat};

    fn q(v: &[i64]) -> QVec {
        v.iter().map(|&x| rat(x, 1)).collect()
    }

    fn plane_d3(fan: &Arc<Fan>) -> Result<QCartierDivisor, DivisorError> {
        let c = |r: &[usize]| fan.cone_by_rays(r).unwrap();
        QCartierDivisor::new(
            fan.clone(),
            vec![(c(&[0, 1]), q(&[0, 0])), (c(&[1, 2]), q(&[-1, 0])), (c(&[0, 2]), q(&[0, -1]))],
        )
    }

    #[test]
    fn plane_boundary_divisor_validates_and_maps_to_its_ray() {
        let fan = Arc::new(projective_space(2));
        let d = plane_d3(&fan).unwrap();
        assert_eq!(d.ray_coefficients(), q(&[0, 0, 1]));
        let z = divisor_cycle(&d);
        assert_eq!(z.coefficient(fan.ray_cone(2)), rat(1, 1));
        assert_eq!(z.coefficient(fan.ray_cone(0)), rat(0, 1));
        assert_eq!(QCartierDivisor::prime(fan.clone(), 2).unwrap(), d);
        // Both maximal cones through ray 3 give equations congruent modulo its annihilator.
        let a = d.local_equation(fan.cone_by_rays(&[1, 2]).unwrap());
        let b = d.local_equation(fan.cone_by_rays(&[0, 2]).unwrap());
        let diff: QVec = a.iter().zip(b).map(|(x, y)| x - y).collect();
        assert!(dot_qi(&diff, fan.ray(2)).is_zero());
    }

    #[test]
    fn disagreeing_equations_are_rejected() {
        let fan = Arc::new(projective_space(2));
        let mut local = vec![q(&[0, 0]); 3];
        let slot = fan.maximal_cones().iter().position(|&c| c == fan.cone_by_rays(&[0, 1]).unwrap()).unwrap();
        local[slot] = q(&[1, 0]);
        let err = QCartierDivisor::from_maximal(fan, local).unwrap_err();
        assert!(matches!(err, DivisorError::AgreementViolation { .. }));
    }

    #[test]
    fn principal_divisors() {
        let fan = Arc::new(affine_space(2));
        let d = QCartierDivisor::principal(fan.clone(), q(&[3, -2]));
        assert_eq!(d.ray_coefficients(), q(&[3, -2]));
        let zero = QCartierDivisor::principal(fan.clone(), q(&[0, 0]));
        assert!(divisor_cycle(&zero).terms().next().is_none());
        let e1 = QCartierDivisor::from_ray_coefficients(fan, &q(&[1, 0])).unwrap();
        assert_eq!(e1.maximal_equations()[0], q(&[1, 0]));
    }

    #[test]
    fn equality_ignores_the_annihilator_of_each_cone() {
        let fan = Arc::new(build_fan(2, vec![vec![int(1), int(0)]], vec![vec![0]]).unwrap());
        let a = QCartierDivisor::from_maximal(fan.clone(), vec![q(&[1, 0])]).unwrap();
        let b = QCartierDivisor::from_maximal(fan.clone(), vec![q(&[1, 5])]).unwrap();
        let c = QCartierDivisor::from_maximal(fan, vec![q(&[2, 0])]).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn degree_requires_points() {
        let fan = Arc::new(projective_space(2));
        let half = rat(1, 2);
        let z = Cycle::from_terms(
            fan.clone(),
            vec![
                (fan.cone_by_rays(&[0, 2]).unwrap(), half.clone()),
                (fan.cone_by_rays(&[1, 2]).unwrap(), half),
            ],
        );
        assert_eq!(degree(&z).unwrap(), rat(1, 1));
        assert_eq!(degree(&Cycle::zero(fan.clone())).unwrap(), rat(0, 1));
        let line = Cycle::from_terms(fan.clone(), vec![(fan.ray_cone(0), rat(1, 1))]);
        assert!(degree(&line).is_err());
    }
}
