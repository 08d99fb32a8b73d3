//! Decomposition of a top self-intersection number into signed simplices,
//! one per saturated chain of faces of a full-dimensional cone.

use num::{FromPrimitive, Signed, Zero};

use super::{check_fans, IntersectionError};
use crate::complements::Complements;
use crate::divisor::QCartierDivisor;
use crate::fan::{ConeId, Fan};
use crate::linalg::{dot_qi, QVec, Rational};
use crate::polytope::lattice_volume;

#[derive(Debug, Clone, PartialEq)]
pub struct ChainTerm {
    /// `0 = γ_0 ⊂ γ_1 ⊂ ... ⊂ γ_n = σ`.
    pub chain: Vec<ConeId>,
    /// `π_{γ_i}(m_σ)` for each cone of the chain.
    pub vertices: Vec<QVec>,
    /// Product of the pairings along the chain.
    pub product: Rational,
    /// Normalized so that a unimodular simplex has volume `1/n!`.
    pub volume: Rational,
}

impl ChainTerm {
    /// `|product| = n! · volume`.
    pub fn is_consistent(&self) -> bool {
        let n = self.vertices.len().saturating_sub(1);
        let fact = (1..=n).fold(Rational::from_integer(1.into()), |acc, k| {
            acc * Rational::from_usize(k).expect("small")
        });
        self.product.abs() == fact * &self.volume
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VolumeDecomposition {
    pub terms: Vec<ChainTerm>,
    /// Sum of the products; the coefficient of `[V(σ)]` in `D^n · [X]`.
    pub total: Rational,
}

fn chains(fan: &Fan, top: ConeId) -> Vec<Vec<ConeId>> {
    fn extend(fan: &Fan, top: ConeId, prefix: &mut Vec<ConeId>, out: &mut Vec<Vec<ConeId>>) {
        let last = *prefix.last().expect("nonempty");
        if last == top {
            out.push(prefix.clone());
            return;
        }
        for (next, _) in &fan.geometry(last).over {
            if fan.is_face(*next, top) {
                prefix.push(*next);
                extend(fan, top, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(fan, top, &mut vec![fan.zero_cone()], &mut out);
    out
}

pub fn dn_volume_decomposition(
    d: &QCartierDivisor,
    sigma: ConeId,
    psi: &Complements,
) -> Result<VolumeDecomposition, IntersectionError> {
    check_fans(&[d.fan(), psi.fan()])?;
    let fan = d.fan();
    if fan.dim(sigma) != fan.rank() {
        return Err(IntersectionError::NotFullDimensional(fan.cone_rays(sigma).to_vec()));
    }
    let m = d.local_equation(sigma);
    let terms: Vec<ChainTerm> = chains(fan, sigma)
        .into_iter()
        .map(|chain| {
            let vertices: Vec<QVec> = chain.iter().map(|&g| psi.project(g, m)).collect();
            let product = chain
                .windows(2)
                .zip(&vertices)
                .map(|(w, v)| dot_qi(v, fan.primitive_quotient_generator(w[1], w[0]).expect("chain step")))
                .fold(Rational::from_integer(1.into()), |acc, x| acc * x);
            let volume = lattice_volume(&vertices);
            ChainTerm { chain, vertices, product, volume }
        })
        .collect();
    let total = terms.iter().fold(Rational::zero(), |acc, t| acc + &t.product);
    Ok(VolumeDecomposition { terms, total })
}
