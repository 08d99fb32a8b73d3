//! Geometry of a single rational polyhedral cone given by generating rays.

use itertools::Itertools;
use num::{Signed, Zero};

use crate::linalg::{
    clear_denominators, dot, independent_rows, kernel_q, rank_q, to_qmatrix, to_qvec, IntVec, QMatrix,
    QVec, Rational,
};

/// Inequality description: `⟨e, x⟩ = 0` for every equation and `⟨u, x⟩ >= 0`
/// for every facet normal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfspaceCone {
    pub equations: Vec<QVec>,
    pub inequalities: Vec<QVec>,
}

impl HalfspaceCone {
    pub fn contains(&self, x: &[Rational]) -> bool {
        self.equations.iter().all(|e| dot(e, x).is_zero())
            && self.inequalities.iter().all(|u| !dot(u, x).is_negative())
    }

    pub fn contains_in_relative_interior(&self, x: &[Rational]) -> bool {
        self.equations.iter().all(|e| dot(e, x).is_zero())
            && self.inequalities.iter().all(|u| dot(u, x).is_positive())
    }

    pub fn intersect(&self, other: &HalfspaceCone) -> HalfspaceCone {
        HalfspaceCone {
            equations: self.equations.iter().chain(&other.equations).cloned().collect(),
            inequalities: self.inequalities.iter().chain(&other.inequalities).cloned().collect(),
        }
    }

    /// Primitive integer generators of the extreme rays, assuming the cone is pointed.
    pub fn extreme_rays(&self, ambient: usize) -> Vec<IntVec> {
        let lin = kernel_q(&self.equations, ambient);
        let l = lin.len();
        if l == 0 {
            return Vec::new();
        }
        // Restrict the inequalities to coordinates on the linear span.
        let restricted: QMatrix = self
            .inequalities
            .iter()
            .map(|u| lin.iter().map(|b| dot(u, b)).collect())
            .collect();
        let mut found: Vec<IntVec> = Vec::new();
        for subset in (0..restricted.len()).combinations(l - 1) {
            let rows: QMatrix = subset.iter().map(|&i| restricted[i].clone()).collect();
            let ker = kernel_q(&rows, l);
            if ker.len() != 1 {
                continue;
            }
            let a = &ker[0];
            let x: QVec = (0..ambient)
                .map(|k| {
                    a.iter()
                        .zip(&lin)
                        .fold(Rational::zero(), |acc, (ai, b)| acc + ai * &b[k])
                })
                .collect();
            for candidate in [x.clone(), x.iter().map(|t| -t).collect::<QVec>()] {
                if self.inequalities.iter().all(|u| !dot(u, &candidate).is_negative()) {
                    let ray = clear_denominators(&candidate);
                    if !found.contains(&ray) {
                        found.push(ray);
                    }
                }
            }
        }
        found
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum ConeShapeError {
    NotPointed,
    NotExtremal(usize),
}

/// A facet as the local indices of the rays it contains, with an inward normal.
pub(crate) type Facet = (Vec<usize>, QVec);

/// Facets of the cone spanned by `rays`, or an error if it contains a line.
///
/// Candidate normals come from every `(d-1)`-subset of rays; a candidate is a
/// facet normal when all rays lie weakly on one side of it.
pub(crate) fn facets(rays: &[IntVec], ambient: usize) -> Result<Vec<Facet>, ConeShapeError> {
    let qrays: QMatrix = to_qmatrix(&rays.to_vec());
    let d = rank_q(&qrays, ambient);
    if d == 0 {
        return Ok(Vec::new());
    }
    let basis = independent_rows(&qrays, ambient);
    // gram[r][j] = ⟨b_j, r⟩: a normal is written as Σ a_j b_j.
    let gram: QMatrix = qrays
        .iter()
        .map(|r| basis.iter().map(|&j| dot(&qrays[j], r)).collect())
        .collect();
    let mut result: Vec<Facet> = Vec::new();
    let mut coefficient_vectors: QMatrix = Vec::new();
    for subset in (0..rays.len()).combinations(d - 1) {
        let rows: QMatrix = subset.iter().map(|&i| gram[i].clone()).collect();
        let ker = kernel_q(&rows, d);
        if ker.len() != 1 {
            continue;
        }
        let mut a = ker.into_iter().next().unwrap();
        let values: QVec = gram.iter().map(|g| dot(g, &a)).collect();
        let (pos, neg) = values.iter().fold((false, false), |(p, n), v| {
            (p || v.is_positive(), n || v.is_negative())
        });
        if pos && neg {
            continue;
        }
        if neg {
            a = a.iter().map(|t| -t).collect();
        }
        let zero_set: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_zero()).collect();
        if result.iter().any(|(z, _)| *z == zero_set) {
            continue;
        }
        let normal: QVec = (0..ambient)
            .map(|k| {
                a.iter()
                    .zip(&basis)
                    .fold(Rational::zero(), |acc, (ai, &j)| acc + ai * &qrays[j][k])
            })
            .collect();
        coefficient_vectors.push(a);
        result.push((zero_set, to_qvec(&clear_denominators(&normal))));
    }
    if rank_q(&coefficient_vectors, d) < d {
        return Err(ConeShapeError::NotPointed);
    }
    Ok(result)
}

/// All faces of the cone, as sorted local ray-index sets, including the cone itself.
pub(crate) fn faces(rays: &[IntVec], ambient: usize) -> Result<Vec<Vec<usize>>, ConeShapeError> {
    let all: Vec<usize> = (0..rays.len()).collect();
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut stack = vec![all];
    while let Some(set) = stack.pop() {
        if out.contains(&set) {
            continue;
        }
        let sub: Vec<IntVec> = set.iter().map(|&i| rays[i].clone()).collect();
        let d = rank_q(&to_qmatrix(&sub), ambient);
        if d == set.len() {
            // Simplicial: every subset is a face.
            for k in 0..=set.len() {
                for s in set.iter().copied().combinations(k) {
                    if !out.contains(&s) {
                        out.push(s);
                    }
                }
            }
            continue;
        }
        for (local, _) in facets(&sub, ambient)? {
            stack.push(local.iter().map(|&i| set[i]).collect());
        }
        out.push(set);
    }
    if let Some(i) = (0..rays.len()).find(|&i| !out.contains(&vec![i])) {
        return Err(ConeShapeError::NotExtremal(i));
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// Inequality description of the cone spanned by `rays`.
pub(crate) fn halfspaces(rays: &[IntVec], ambient: usize) -> Result<HalfspaceCone, ConeShapeError> {
    let qrays = to_qmatrix(&rays.to_vec());
    let equations = kernel_q(&qrays, ambient);
    let inequalities = facets(rays, ambient)?.into_iter().map(|(_, u)| u).collect();
    Ok(HalfspaceCone { equations, inequalities })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    fn rays(v: &[&[i64]]) -> Vec<IntVec> {
        v.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn square_pyramid_faces() {
        let r = rays(&[&[1, 0, 1], &[0, 1, 1], &[-1, 0, 1], &[0, -1, 1]]);
        let f = faces(&r, 3).unwrap();
        // 1 apex + 4 rays + 4 two-dimensional faces + the cone itself.
        assert_eq!(f.len(), 10);
        assert!(!f.contains(&vec![0, 2]));
        assert!(f.contains(&vec![0, 1]));
    }

    #[test]
    fn line_is_not_pointed() {
        let r = rays(&[&[1, 0], &[-1, 0]]);
        assert_eq!(facets(&r, 2), Err(ConeShapeError::NotPointed));
        let half = rays(&[&[1, 0], &[0, 1], &[-1, 0]]);
        assert_eq!(faces(&half, 2), Err(ConeShapeError::NotPointed));
    }

    #[test]
    fn interior_generator_is_not_extremal() {
        let r = rays(&[&[1, 0], &[1, 1], &[1, 2]]);
        assert_eq!(faces(&r, 2), Err(ConeShapeError::NotExtremal(1)));
    }

    #[test]
    fn intersection_extreme_rays() {
        let a = halfspaces(&rays(&[&[1, 0], &[0, 1]]), 2).unwrap();
        let b = halfspaces(&rays(&[&[1, 1], &[1, -1]]), 2).unwrap();
        let mut ext = a.intersect(&b).extreme_rays(2);
        ext.sort();
        assert_eq!(ext, rays(&[&[1, 0], &[1, 1]]));
    }
}
