//! Presentation of the cycle ring for complements induced by an inner
//! product: Stanley–Reisner relations plus one quadric per ray.

use std::collections::BTreeMap;
use std::sync::Arc;

use itertools::Itertools;
use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{evaluate_on_fundamental, RingError};
use crate::complements::Complements;
use crate::fan::{ConeId, Fan};
use crate::linalg::{inverse_q, mat_vec_q, to_qvec, QMatrix, QVec, Rational};
use crate::poly::{Monomial, Polynomial};

/// Whether some cone contains all of the given rays.
fn covered(fan: &Fan, rays: &[usize]) -> bool {
    fan.maximal_cones()
        .iter()
        .any(|&c| rays.iter().all(|i| fan.cone_rays(c).contains(i)))
}

/// Minimal sets of rays not contained in a common cone, as square-free monomials.
pub fn stanley_reisner_generators(fan: &Fan) -> Vec<Polynomial> {
    let r = fan.num_rays();
    let widest = fan.maximal_cones().iter().map(|&c| fan.cone_rays(c).len()).max().unwrap_or(0);
    let mut out = Vec::new();
    for size in 2..=(widest + 1).min(r) {
        for set in (0..r).combinations(size) {
            if covered(fan, &set) {
                continue;
            }
            let minimal = (0..size).all(|skip| {
                let rest: Vec<usize> = set.iter().enumerate().filter(|(k, _)| *k != skip).map(|(_, &i)| i).collect();
                covered(fan, &rest)
            });
            if minimal {
                out.push(super::face_monomial(r, &set));
            }
        }
    }
    out
}

/// `A_{ji} = ⟨ω(v_j), v_i⟩ = v_j^T G^{-1} v_i` where `ω` is the identification
/// of `N_Q` with `M_Q` induced by the inner product `G` on `M`.
fn ray_pairing(fan: &Fan, gram: &QMatrix) -> Result<QMatrix, RingError> {
    let inv = inverse_q(gram)
        .map_err(|_| RingError::Complement(crate::complements::ComplementError::NotPositiveDefinite))?;
    let rays: Vec<QVec> = fan.rays().iter().map(|v| to_qvec(v)).collect();
    let omega: Vec<QVec> = rays.iter().map(|v| mat_vec_q(&inv, v)).collect();
    Ok(omega.iter().map(|w| rays.iter().map(|v| crate::linalg::dot(w, v)).collect()).collect())
}

/// `J_j = Y_j · Σ_i ⟨ω(v_j), v_i⟩ Y_i`, one per ray.
pub fn j_generators(fan: &Arc<Fan>, gram: &QMatrix) -> Result<Vec<Polynomial>, RingError> {
    // Validates shape, symmetry and definiteness.
    Complements::inner_product(fan.clone(), gram.clone())?;
    if !fan.is_simplicial() {
        return Err(RingError::NotSimplicial);
    }
    let a = ray_pairing(fan, gram)?;
    let r = fan.num_rays();
    Ok((0..r)
        .map(|j| Polynomial::var(r, j).mul(&Polynomial::linear(&a[j])))
        .collect())
}

/// Rewriting data for one cone: `Y_{rays[a]} Y_σ ≡ Σ_l step[a][l] Y_{others[l]} Y_σ`.
#[derive(Debug, Clone)]
struct Rewrite {
    rays: Vec<usize>,
    others: Vec<usize>,
    step: QMatrix,
}

#[derive(Debug, Clone)]
pub struct Presentation {
    fan: Arc<Fan>,
    stanley_reisner: Vec<Polynomial>,
    quadrics: Vec<Polynomial>,
    rewrites: Vec<Rewrite>,
}

impl Presentation {
    pub fn new(fan: Arc<Fan>, gram: &QMatrix) -> Result<Self, RingError> {
        let quadrics = j_generators(&fan, gram)?;
        let pairing = ray_pairing(&fan, gram)?;
        let r = fan.num_rays();
        let rewrites = fan
            .cone_ids()
            .map(|c| {
                let rays = fan.cone_rays(c).to_vec();
                let others: Vec<usize> = (0..r).filter(|i| !rays.contains(i)).collect();
                let a: QMatrix = rays.iter().map(|&j| rays.iter().map(|&i| pairing[j][i].clone()).collect()).collect();
                // A is a Gram matrix of independent vectors, hence invertible.
                let a_inv = inverse_q(&a).expect("pairing on a simplicial cone is nondegenerate");
                let step = (0..rays.len())
                    .map(|x| {
                        others
                            .iter()
                            .map(|&l| {
                                -(0..rays.len()).fold(Rational::zero(), |acc, y| acc + &a_inv[x][y] * &pairing[rays[y]][l])
                            })
                            .collect()
                    })
                    .collect();
                Rewrite { rays, others, step }
            })
            .collect();
        Ok(Self { stanley_reisner: stanley_reisner_generators(&fan), fan, quadrics, rewrites })
    }

    pub fn fan(&self) -> &Arc<Fan> {
        &self.fan
    }

    pub fn stanley_reisner(&self) -> &[Polynomial] {
        &self.stanley_reisner
    }

    pub fn quadrics(&self) -> &[Polynomial] {
        &self.quadrics
    }

    /// A combination of face monomials `Y_σ` congruent to `p`.
    ///
    /// Each step rewrites `Y_i Y_σ` for the smallest repeated `i`, which lowers
    /// the excess exponent `Σ (a_i - 1)` by one.
    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        let r = self.fan.num_rays();
        assert_eq!(p.nvars(), r, "one variable per ray");
        let mut pending: BTreeMap<Monomial, Rational> = p.terms().map(|(e, c)| (e.clone(), c.clone())).collect();
        let mut out = Polynomial::zero(r);
        while let Some((e, c)) = pending.pop_last() {
            if c.is_zero() {
                continue;
            }
            let support: Vec<usize> = (0..r).filter(|&i| e[i] > 0).collect();
            let Some(cone) = self.fan.cone_by_rays(&support) else {
                continue;
            };
            let Some(i) = support.iter().copied().find(|&i| e[i] >= 2) else {
                out.add_term(e, c);
                continue;
            };
            let rewrite = &self.rewrites[cone.0];
            let a = rewrite.rays.iter().position(|&x| x == i).expect("i is a ray of the cone");
            for (l, coefficient) in rewrite.others.iter().zip(&rewrite.step[a]) {
                if coefficient.is_zero() {
                    continue;
                }
                let mut next = e.clone();
                next[i] -= 1;
                next[*l] += 1;
                *pending.entry(next).or_insert_with(Rational::zero) += &c * coefficient;
            }
        }
        out
    }

    /// The cone of each face monomial in a reduced polynomial.
    pub fn face_of(&self, e: &[u32]) -> Option<ConeId> {
        let support: Vec<usize> = (0..e.len()).filter(|&i| e[i] > 0).collect();
        self.fan.cone_by_rays(&support)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PresentationReport {
    pub generators_checked: usize,
    /// Generators whose evaluation on `[X]` is not the zero cycle.
    pub nonzero_generators: Vec<Polynomial>,
    pub polynomials_checked: usize,
    /// Polynomials whose reduction evaluates differently from themselves.
    pub mismatches: Vec<Polynomial>,
}

impl PresentationReport {
    pub fn passed(&self) -> bool {
        self.nonzero_generators.is_empty() && self.mismatches.is_empty()
    }
}

/// A random polynomial with total degree at most `max_degree` and
/// coefficients in `[-9, 9]`.
pub(crate) fn random_polynomial(rng: &mut impl Rng, nvars: usize, max_degree: u32) -> Polynomial {
    let mut p = Polynomial::zero(nvars);
    for _ in 0..rng.gen_range(1..=4) {
        let degree = rng.gen_range(0..=max_degree);
        let mut e = vec![0u32; nvars];
        for _ in 0..degree {
            e[rng.gen_range(0..nvars)] += 1;
        }
        p.add_term(e, Rational::from_integer(rng.gen_range(-9i64..=9).into()));
    }
    p
}

/// Checks that every generator of the presentation built from `gram` acts
/// as zero with complements `psi`, and that reduction agrees with direct
/// evaluation on `battery` random polynomials.
pub fn verify_presentation(
    gram: &QMatrix,
    psi: &Complements,
    battery: usize,
    seed: u64,
) -> Result<PresentationReport, RingError> {
    let presentation = Presentation::new(psi.fan().clone(), gram)?;
    let generators: Vec<&Polynomial> = presentation.stanley_reisner.iter().chain(&presentation.quadrics).collect();
    let mut nonzero_generators = Vec::new();
    for g in &generators {
        if !evaluate_on_fundamental(g, psi)?.is_zero() {
            nonzero_generators.push((*g).clone());
        }
    }
    let fan = psi.fan();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mismatches = Vec::new();
    for _ in 0..battery {
        let p = random_polynomial(&mut rng, fan.num_rays(), fan.rank() as u32 + 2);
        let direct = evaluate_on_fundamental(&p, psi)?;
        let reduced = evaluate_on_fundamental(&presentation.reduce(&p), psi)?;
        if direct != reduced {
            mismatches.push(p);
        }
    }
    Ok(PresentationReport {
        generators_checked: generators.len(),
        nonzero_generators,
        polynomials_checked: battery,
        mismatches,
    })
}

