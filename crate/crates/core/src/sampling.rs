//! Seeded generators of random instances for property checks.

use std::sync::Arc;

use num::Zero;
use rand::Rng;

use crate::complements::Complements;
use crate::cycle::Cycle;
use crate::divisor::QCartierDivisor;
use crate::fan::{build_fan, Fan};
use crate::linalg::{det_q, dot_qi, int, kernel_q, primitive, rat, IntVec, QMatrix, QVec, Rational};
use crate::morphism::{star_subdivision, ToricMorphism};
use crate::ring::{lefschetz_injectivity, LefschetzReport, RingError};

const ATTEMPTS: usize = 1000;

/// `B^T B + I` for `B` with entries in `[-3, 3]`: always positive definite.
pub fn random_gram(rng: &mut impl Rng, n: usize) -> QMatrix {
    let b: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect()).collect();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| rat((0..n).map(|k| b[k][i] * b[k][j]).sum::<i64>() + i64::from(i == j), 1))
                .collect()
        })
        .collect()
}

/// A flag generic for every cone of the fan.
pub fn random_flag(rng: &mut impl Rng, fan: &Arc<Fan>) -> Complements {
    let n = fan.rank();
    for _ in 0..ATTEMPTS {
        let basis: QMatrix = (0..n).map(|_| (0..n).map(|_| rat(rng.gen_range(-5..=5), 1)).collect()).collect();
        if let Ok(psi) = Complements::flag(fan.clone(), basis) {
            return psi;
        }
    }
    panic!("no generic flag found in {ATTEMPTS} attempts");
}

/// Complements spanned by one random vector per ray on simplicial fans, and
/// the cone-by-cone form of a random inner product otherwise.
pub fn random_explicit(rng: &mut impl Rng, fan: &Arc<Fan>) -> Complements {
    let n = fan.rank();
    if !fan.is_simplicial() {
        return Complements::inner_product(fan.clone(), random_gram(rng, n))
            .expect("random gram is positive definite")
            .to_explicit();
    }
    for _ in 0..ATTEMPTS {
        let vectors: Vec<QVec> =
            (0..fan.num_rays()).map(|_| (0..n).map(|_| rat(rng.gen_range(-4..=4), 1)).collect()).collect();
        let subspaces = fan
            .cone_ids()
            .map(|c| (c, fan.cone_rays(c).iter().map(|&i| vectors[i].clone()).collect()))
            .collect();
        if let Ok(psi) = Complements::explicit(fan.clone(), subspaces) {
            return psi;
        }
    }
    panic!("no complementary choice found in {ATTEMPTS} attempts");
}

/// A random integral Q-Cartier divisor: a random integer combination of a
/// basis of the solutions of the agreement conditions.
pub fn random_divisor(rng: &mut impl Rng, fan: &Arc<Fan>) -> QCartierDivisor {
    let n = fan.rank();
    let maximal = fan.maximal_cones();
    let unknowns = n * maximal.len();
    let mut rows: QMatrix = Vec::new();
    for (a, &s) in maximal.iter().enumerate() {
        for (b, &t) in maximal.iter().enumerate().skip(a + 1) {
            for &i in fan.cone_rays(s).iter().filter(|i| fan.cone_rays(t).contains(i)) {
                let mut row = vec![Rational::zero(); unknowns];
                for (k, x) in fan.ray(i).iter().enumerate() {
                    row[a * n + k] = Rational::from_integer(x.clone());
                    row[b * n + k] = -Rational::from_integer(x.clone());
                }
                rows.push(row);
            }
        }
    }
    let kernel = kernel_q(&rows, unknowns);
    let mut x = vec![Rational::zero(); unknowns];
    for v in &kernel {
        let c = rat(rng.gen_range(-3..=3), 1);
        for (xi, vi) in x.iter_mut().zip(v) {
            *xi += &c * vi;
        }
    }
    let local = (0..maximal.len()).map(|a| x[a * n..(a + 1) * n].to_vec()).collect();
    QCartierDivisor::from_maximal(fan.clone(), local).expect("kernel vectors satisfy agreement")
}

/// Coefficients in `[-5, 5]` on roughly half of the cones.
pub fn random_cycle(rng: &mut impl Rng, fan: &Arc<Fan>) -> Cycle {
    let mut terms = Vec::new();
    for c in fan.cone_ids() {
        if rng.gen_bool(0.5) {
            terms.push((c, rat(rng.gen_range(-5..=5), 1)));
        }
    }
    Cycle::from_terms(fan.clone(), terms)
}

/// A full-dimensional simplicial cone with rays of entries in `[-3, 3]`,
/// as an affine fan.
pub fn random_simplicial_cone(rng: &mut impl Rng, n: usize) -> Arc<Fan> {
    for _ in 0..ATTEMPTS {
        let rays: Vec<IntVec> = (0..n)
            .map(|_| primitive(&(0..n).map(|_| int(rng.gen_range(-3..=3))).collect::<IntVec>()))
            .collect();
        let q: QMatrix = rays.iter().map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect()).collect();
        if det_q(&q).is_zero() {
            continue;
        }
        if let Ok(fan) = build_fan(n, rays, vec![(0..n).collect()]) {
            return Arc::new(fan);
        }
    }
    panic!("no simplicial cone found in {ATTEMPTS} attempts");
}

/// Star subdivision at a random positive integer combination of the rays
/// of a random cone of dimension at least two.
pub fn random_blowup(rng: &mut impl Rng, fan: &Arc<Fan>) -> (Arc<Fan>, ToricMorphism) {
    let candidates: Vec<_> = fan.cone_ids().filter(|&c| fan.dim(c) >= 2).collect();
    let c = candidates[rng.gen_range(0..candidates.len())];
    let n = fan.rank();
    let mut v = vec![int(0); n];
    for r in fan.ray_vectors(c) {
        let k = int(rng.gen_range(1..=3));
        for (vi, ri) in v.iter_mut().zip(&r) {
            *vi += &k * ri;
        }
    }
    star_subdivision(fan, &primitive(&v)).expect("interior point of a cone of the fan")
}

/// Whether `⟨m, v⟩` is integral on every ray for every local equation.
pub fn is_integral(d: &QCartierDivisor) -> bool {
    let fan = d.fan();
    fan.maximal_cones().iter().zip(d.maximal_equations()).all(|(&c, m)| {
        fan.cone_rays(c).iter().all(|&i| dot_qi(m, fan.ray(i)).is_integer())
    })
}

/// Outcome of the hard Lefschetz check with sampled inner products.
#[derive(Debug, Clone)]
pub struct SampledLefschetz {
    pub report: LefschetzReport,
    /// Gram matrix of the last sample tried.
    pub gram: QMatrix,
    /// Number of samples drawn, at most `1 + resamples`.
    pub samples: usize,
}

/// Draws inner products until multiplication by `ω^{n-2i}` is injective or
/// `resamples` further draws have failed.
pub fn sampled_lefschetz(
    rng: &mut impl Rng,
    fan: &Arc<Fan>,
    coefficients: &[Rational],
    i: usize,
    resamples: usize,
) -> Result<SampledLefschetz, RingError> {
    let mut samples = 0;
    loop {
        let gram = random_gram(rng, fan.rank());
        samples += 1;
        let psi = Complements::inner_product(fan.clone(), gram.clone()).expect("random gram is positive definite");
        let report = lefschetz_injectivity(&psi, coefficients, i)?;
        if report.injective || samples > resamples {
            return Ok(SampledLefschetz { report, gram, samples });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_produce_valid_objects() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (_, fan) in fixtures::catalogue() {
            let fan = Arc::new(fan);
            let g = random_gram(&mut rng, fan.rank());
            assert!(Complements::inner_product(fan.clone(), g).is_ok());
            random_flag(&mut rng, &fan);
            random_explicit(&mut rng, &fan);
            assert!(is_integral(&random_divisor(&mut rng, &fan)));
            random_cycle(&mut rng, &fan);
            if fan.cone_ids().any(|c| fan.dim(c) >= 2) {
                let (refined, f) = random_blowup(&mut rng, &fan);
                assert!(refined.num_rays() >= fan.num_rays());
                assert!(matches!(f.is_proper_restricted(), crate::morphism::Properness::Proper(_)));
            }
        }
        for n in 1..=4 {
            assert_eq!(random_simplicial_cone(&mut rng, n).maximal_cones().len(), 1);
        }
    }
}
