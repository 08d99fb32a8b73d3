//! Lattice polytopes in `M_Q`: vertices, triangulation and normalized volume.

use itertools::Itertools;
use num::{Signed, Zero};

use crate::divisor::{DivisorError, QCartierDivisor};
use crate::linalg::{
    clear_denominators, det_q, dot, dot_qi, independent_rows, kernel_q, rank_q, solve_rational, transpose, LatticeBasis,
    QMatrix, QVec, Rational,
};

fn factorial(k: usize) -> Rational {
    Rational::from_integer((1..=k as u64).product::<u64>().into())
}

fn differences(points: &[QVec]) -> QMatrix {
    points[1..]
        .iter()
        .map(|p| p.iter().zip(&points[0]).map(|(a, b)| a - b).collect())
        .collect()
}

/// Volume of the simplex `conv(u_0..u_k)` normalized by the lattice `M ∩ W`,
/// where `W` is the linear space parallel to its affine span. Zero if degenerate.
pub fn lattice_volume(vertices: &[QVec]) -> Rational {
    let k = vertices.len().saturating_sub(1);
    if k == 0 {
        return Rational::from_integer(1.into());
    }
    let n = vertices[0].len();
    let diffs = differences(vertices);
    if rank_q(&diffs, n) < k {
        return Rational::zero();
    }
    let integral: Vec<_> = diffs.iter().map(|d| clear_denominators(d)).collect();
    let (basis, _) = LatticeBasis::from_generators(n, &integral).saturation();
    let coords: QMatrix = diffs
        .iter()
        .map(|d| basis.coordinates(d).expect("difference lies in its own span"))
        .collect();
    det_q(&coords).abs() / factorial(k)
}

/// A polytope given by its vertices, in the order supplied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    pub vertices: Vec<QVec>,
}

/// Points re-expressed in coordinates on their affine span.
fn affine_chart(points: &[QVec]) -> (usize, Vec<QVec>) {
    let n = points[0].len();
    let diffs = differences(points);
    let basis_idx = independent_rows(&diffs, n);
    let basis: QMatrix = basis_idx.iter().map(|&i| diffs[i].clone()).collect();
    let k = basis.len();
    let bt = transpose(&basis, n);
    let coords = points
        .iter()
        .map(|p| {
            let d: QVec = p.iter().zip(&points[0]).map(|(a, b)| a - b).collect();
            solve_rational(&bt, &d, k).expect("point lies in the affine span").0
        })
        .collect();
    (k, coords)
}

/// Facets of a full-dimensional point configuration in `Q^k`, as the indices
/// of the points on each facet and the inward normal.
fn facets_full(points: &[QVec], k: usize) -> Vec<(Vec<usize>, QVec)> {
    let mut out: Vec<(Vec<usize>, QVec)> = Vec::new();
    for subset in (0..points.len()).combinations(k) {
        let sub: Vec<QVec> = subset.iter().map(|&i| points[i].clone()).collect();
        let diffs = differences(&sub);
        let ker = kernel_q(&diffs, k);
        if ker.len() != 1 {
            continue;
        }
        let mut a = ker.into_iter().next().unwrap();
        let b = dot(&a, &sub[0]);
        let values: Vec<Rational> = points.iter().map(|p| dot(&a, p) - &b).collect();
        let pos = values.iter().any(Signed::is_positive);
        let neg = values.iter().any(Signed::is_negative);
        if pos && neg {
            continue;
        }
        if neg {
            a = a.iter().map(|x| -x).collect();
        }
        let on: Vec<usize> = (0..points.len()).filter(|&i| values[i].is_zero()).collect();
        if !out.iter().any(|(f, _)| *f == on) {
            out.push((on, a));
        }
    }
    out
}

/// Indices of the vertices of `conv(points)`; for repeated points the first copy.
pub fn vertex_indices(points: &[QVec]) -> Vec<usize> {
    let distinct: Vec<usize> = (0..points.len())
        .filter(|&i| !points[..i].contains(&points[i]))
        .collect();
    if distinct.len() == 1 {
        return distinct;
    }
    let pts: Vec<QVec> = distinct.iter().map(|&i| points[i].clone()).collect();
    let (k, coords) = affine_chart(&pts);
    let facets = facets_full(&coords, k);
    (0..pts.len())
        .filter(|&i| {
            let normals: QMatrix =
                facets.iter().filter(|(on, _)| on.contains(&i)).map(|(_, a)| a.clone()).collect();
            rank_q(&normals, k) == k
        })
        .map(|i| distinct[i])
        .collect()
}

/// Simplices (as point indices) triangulating `conv(points)` by repeatedly
/// coning from the lexicographically smallest vertex.
pub fn triangulate(points: &[QVec]) -> Vec<Vec<usize>> {
    let verts = vertex_indices(points);
    if verts.len() == 1 {
        return vec![verts];
    }
    let pts: Vec<QVec> = verts.iter().map(|&i| points[i].clone()).collect();
    let (k, coords) = affine_chart(&pts);
    let apex = (0..pts.len()).min_by(|&a, &b| pts[a].cmp(&pts[b])).unwrap();
    let mut out = Vec::new();
    for (on, _) in facets_full(&coords, k) {
        if on.contains(&apex) {
            continue;
        }
        let facet_points: Vec<QVec> = on.iter().map(|&i| pts[i].clone()).collect();
        for simplex in triangulate(&facet_points) {
            let mut s = vec![verts[apex]];
            s.extend(simplex.iter().map(|&j| verts[on[j]]));
            out.push(s);
        }
    }
    out
}

impl Polytope {
    pub fn dimension(&self) -> usize {
        if self.vertices.len() <= 1 {
            return 0;
        }
        rank_q(&differences(&self.vertices), self.vertices[0].len())
    }

    /// Euclidean volume in units where a unimodular lattice simplex has
    /// volume `1/n!`; zero when the polytope is not full-dimensional.
    pub fn volume(&self) -> Rational {
        let n = self.vertices[0].len();
        if self.dimension() < n {
            return Rational::zero();
        }
        triangulate(&self.vertices)
            .iter()
            .map(|s| {
                let pts: Vec<QVec> = s.iter().map(|&i| self.vertices[i].clone()).collect();
                det_q(&differences(&pts)).abs()
            })
            .fold(Rational::zero(), |acc, x| acc + x)
            / factorial(n)
    }
}

pub fn polytope_volume(p: &Polytope) -> Rational {
    p.volume()
}

/// `conv{-m_σ}` for a divisor on a complete fan whose support function is
/// strictly convex: `⟨m_σ, v_ρ⟩ < a_ρ` for every ray `ρ` outside `σ`.
pub fn polytope_of(d: &QCartierDivisor) -> Result<Polytope, DivisorError> {
    let fan = d.fan();
    if !fan.is_complete() {
        return Err(DivisorError::NotComplete);
    }
    let coefficients = d.ray_coefficients();
    for (&sigma, m) in fan.maximal_cones().iter().zip(d.maximal_equations()) {
        let rays = fan.cone_rays(sigma);
        let convex = (0..fan.num_rays())
            .filter(|i| !rays.contains(i))
            .all(|i| dot_qi(m, fan.ray(i)) < coefficients[i]);
        if !convex {
            return Err(DivisorError::NoPolytope);
        }
    }
    let points: Vec<QVec> = d
        .maximal_equations()
        .iter()
        .map(|m| m.iter().map(|x| -x).collect())
        .collect();
    Ok(Polytope { vertices: points })
}
