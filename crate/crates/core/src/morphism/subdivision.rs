use std::sync::Arc;

use num::Zero;

use super::{pullback_divisor, pushforward, MorphismError, ToricMorphism};
use crate::complements::Complements;
use crate::cycle::Cycle;
use crate::divisor::QCartierDivisor;
use crate::fan::{build_fan, ConeId, Fan};
use crate::intersection::intersect;
use crate::linalg::{is_primitive, primitive, to_qvec, IntVec, QMatrix};

/// Upper bound on star subdivisions performed by [`simplicialize`].
pub const SIMPLICIALIZE_CAP: usize = 64;

/// Replaces every maximal cone `σ` containing `v` by the cones spanned by `v`
/// and the facets of `σ` not containing `v`. Returns the refined fan and the
/// identity map onto the original.
pub fn star_subdivision(fan: &Arc<Fan>, v: &IntVec) -> Result<(Arc<Fan>, ToricMorphism), MorphismError> {
    if v.len() != fan.rank() || v.iter().all(Zero::is_zero) || !is_primitive(v) {
        return Err(MorphismError::NotPrimitive(v.clone()));
    }
    let point = to_qvec(v);
    if fan.minimal_cone_containing(&point).is_none() {
        return Err(MorphismError::RayOutsideSupport(v.clone()));
    }
    let mut rays = fan.rays().to_vec();
    let index = match rays.iter().position(|r| r == v) {
        Some(i) => i,
        None => {
            rays.push(v.clone());
            rays.len() - 1
        }
    };
    let mut cones: Vec<Vec<usize>> = Vec::new();
    for &sigma in fan.maximal_cones() {
        if !fan.contains_point(sigma, &point) {
            cones.push(fan.cone_rays(sigma).to_vec());
            continue;
        }
        for &facet in fan.facets(sigma) {
            if fan.contains_point(facet, &point) {
                continue;
            }
            let mut c = fan.cone_rays(facet).to_vec();
            c.push(index);
            cones.push(c);
        }
    }
    let refined = Arc::new(build_fan(fan.rank(), rays, cones)?);
    let map = ToricMorphism::identity(refined.clone(), fan.clone())?;
    Ok((refined, map))
}

/// The first non-simplicial cone of smallest dimension.
fn minimal_non_simplicial(fan: &Fan) -> Option<ConeId> {
    fan.cone_ids().find(|&c| !fan.cone(c).is_simplicial())
}

/// Star-subdivides at the primitive ray through the sum of the rays of a
/// minimal non-simplicial cone until the fan is simplicial.
pub fn simplicialize(fan: &Arc<Fan>) -> Result<(Arc<Fan>, ToricMorphism), MorphismError> {
    let mut current = fan.clone();
    for _ in 0..SIMPLICIALIZE_CAP {
        let Some(c) = minimal_non_simplicial(&current) else {
            return Ok((current.clone(), ToricMorphism::identity(current, fan.clone())?));
        };
        let sum: IntVec = current
            .ray_vectors(c)
            .into_iter()
            .reduce(|a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect())
            .expect("a non-simplicial cone has rays");
        current = star_subdivision(&current, &primitive(&sum))?.0;
    }
    Err(MorphismError::CannotSimplicialize(SIMPLICIALIZE_CAP))
}

/// `E_1 ⋯ E_k · [X]` computed on a simplicial refinement `X′` as
/// `f_*(f*E_1 ⋯ f*E_k · [X′])`, with complements on both fans induced by
/// `gram`. Refining cones of equal codimension share their span, so the
/// two choices are compatible.
pub fn product_on_nonsimplicial(divisors: &[QCartierDivisor], gram: &QMatrix) -> Result<Cycle, MorphismError> {
    let Some(first) = divisors.first() else {
        return Err(MorphismError::FanMismatch);
    };
    let fan = first.fan().clone();
    let (refined, f) = simplicialize(&fan)?;
    let psi_source = Complements::inner_product(refined.clone(), gram.clone())?;
    let mut z = Cycle::fundamental(refined);
    for d in divisors.iter().rev() {
        z = intersect(&pullback_divisor(&f, d)?, &z, &psi_source)?;
    }
    pushforward(&f, &z)
}

