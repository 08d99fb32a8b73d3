use crate::linalg::{
    primitive, quotient_coordinates, to_qvec, IntVec, Integer, LatticeBasis, QuotientChart,
};

use super::cone::{self, HalfspaceCone};
use super::{build_fan, ConeId, Fan};

/// Lattice data attached to a cone `σ`, computed on first use.
#[derive(Debug, Clone)]
pub struct ConeGeometry {
    /// Chart of `N(σ) = N / N_σ`; its sublattice is `N_σ`.
    pub chart: QuotientChart,
    pub halfspaces: HalfspaceCone,
    /// For each cone `τ` having `σ` as a facet, the lift in `N_τ` of the
    /// primitive generator of the image of `τ` in `N(σ)`.
    pub over: Vec<(ConeId, IntVec)>,
    pub multiplicity: Integer,
}

impl ConeGeometry {
    pub(super) fn compute(fan: &Fan, id: ConeId) -> Self {
        let n = fan.rank();
        let rays = fan.ray_vectors(id);
        let (saturated, multiplicity) = LatticeBasis::from_generators(n, &rays).saturation();
        let chart = quotient_coordinates(n, &saturated).expect("saturation is saturated");
        let equations = chart.annihilator_basis().iter().map(|m| to_qvec(m)).collect();
        let inequalities = cone::facets(&rays, n)
            .expect("validated cone")
            .into_iter()
            .map(|(_, u)| u)
            .collect();
        let over = fan
            .cones_over(id)
            .iter()
            .map(|&tau| {
                let r = outside_ray(fan, tau, id);
                let gen = primitive(&chart.project(r));
                (tau, chart.section(&gen))
            })
            .collect();
        Self {
            chart,
            halfspaces: HalfspaceCone { equations, inequalities },
            over,
            multiplicity,
        }
    }

    /// `M(σ) = M ∩ σ^⊥`, dual to the quotient coordinates.
    pub fn orthogonal_lattice(&self) -> Vec<IntVec> {
        self.chart.annihilator_basis()
    }
}

fn outside_ray(fan: &Fan, tau: ConeId, sigma: ConeId) -> &IntVec {
    let inner = fan.cone_rays(sigma);
    let i = fan
        .cone_rays(tau)
        .iter()
        .find(|r| !inner.contains(r))
        .expect("a larger cone has a ray outside its facet");
    fan.ray(*i)
}

/// The fan in `N(σ)` formed by the images of the cones containing `σ`.
#[derive(Debug, Clone)]
pub struct StarFan {
    pub fan: Fan,
    /// `to_original[c]` is the cone of the ambient fan whose image is star cone `c`.
    pub to_original: Vec<ConeId>,
}

impl StarFan {
    pub(super) fn new(fan: &Fan, sigma: ConeId) -> Self {
        let geometry = fan.geometry(sigma);
        let over: Vec<ConeId> = fan.cones_over(sigma).to_vec();
        let rays: Vec<IntVec> = over
            .iter()
            .map(|&t| primitive(&geometry.chart.project(outside_ray(fan, t, sigma))))
            .collect();
        let image = |tau: ConeId| -> Vec<usize> {
            (0..over.len()).filter(|&i| fan.is_face(over[i], tau)).collect()
        };
        let containing = fan.star_cones(sigma);
        let maximal: Vec<Vec<usize>> = containing
            .iter()
            .filter(|&&t| fan.is_maximal(t))
            .map(|&t| image(t))
            .collect();
        let star = build_fan(geometry.chart.quotient_rank(), rays, maximal)
            .expect("the star of a cone is a fan");
        let to_original = star
            .cone_ids()
            .map(|c| {
                let s = star.cone_rays(c);
                *containing
                    .iter()
                    .find(|&&t| image(t) == s)
                    .expect("each star cone is the image of a cone")
            })
            .collect();
        Self { fan: star, to_original }
    }

    pub fn original(&self, c: ConeId) -> ConeId {
        self.to_original[c.0]
    }

    pub fn from_original(&self, tau: ConeId) -> Option<ConeId> {
        self.to_original.iter().position(|&t| t == tau).map(ConeId)
    }
}
