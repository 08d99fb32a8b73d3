//! Sublattices of `Z^n`, indices, and quotient charts.

use num::{One, Signed, Zero};

use super::normal_form::{hermite_normal_form, smith_normal_form};
use super::rational::{IntMatrix, IntVec, Integer, QVec, Rational};
use super::solve::{inverse_q, rank_q, solve_rational, to_qmatrix, transpose};
use super::{det_q, LinalgError};

/// A Z-basis of a sublattice of `Z^ambient`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeBasis {
    ambient: usize,
    vectors: Vec<IntVec>,
}

impl LatticeBasis {
    /// The vectors must be linearly independent.
    pub fn new(ambient: usize, vectors: Vec<IntVec>) -> Result<Self, LinalgError> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(LinalgError::DimensionMismatch { expected: ambient, found: v.len() });
        }
        if rank_q(&to_qmatrix(&vectors), ambient) != vectors.len() {
            return Err(LinalgError::Dependent);
        }
        Ok(Self { ambient, vectors })
    }

    /// A basis of the lattice generated by arbitrary integer vectors.
    pub fn from_generators(ambient: usize, generators: &[IntVec]) -> Self {
        let hf = hermite_normal_form(&generators.to_vec(), ambient);
        let vectors = hf.h.into_iter().take(hf.rank).collect();
        Self { ambient, vectors }
    }

    pub fn zero(ambient: usize) -> Self {
        Self { ambient, vectors: Vec::new() }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[IntVec] {
        &self.vectors
    }

    /// The saturation `span_Q(L) ∩ Z^n` together with the index of `L` in it.
    pub fn saturation(&self) -> (LatticeBasis, Integer) {
        let sf = smith_normal_form(&self.vectors, self.ambient);
        let v_inv = unimodular_inverse(&sf.v);
        let index = sf.invariant_factors.iter().product();
        let vectors = v_inv.into_iter().take(self.rank()).collect();
        (LatticeBasis { ambient: self.ambient, vectors }, index)
    }

    pub fn is_saturated(&self) -> bool {
        self.saturation().1.is_one()
    }

    /// Rational coordinates of `x` in this basis, if `x` lies in the rational span.
    pub fn coordinates(&self, x: &[Rational]) -> Option<QVec> {
        let a = transpose(&to_qmatrix(&self.vectors), self.ambient);
        solve_rational(&a, x, self.rank()).ok().map(|(c, _)| c)
    }
}

fn unimodular_inverse(v: &IntMatrix) -> IntMatrix {
    let inv = inverse_q(&to_qmatrix(v)).expect("unimodular matrix is invertible");
    inv.into_iter()
        .map(|row| row.into_iter().map(|x| x.to_integer()).collect())
        .collect()
}

/// `[sup : sub]`. Both must have the same rank and `sub ⊆ sup`.
pub fn lattice_index(sub: &LatticeBasis, sup: &LatticeBasis) -> Result<Integer, LinalgError> {
    if sub.ambient != sup.ambient {
        return Err(LinalgError::DimensionMismatch { expected: sup.ambient, found: sub.ambient });
    }
    if sub.rank() != sup.rank() {
        return Err(LinalgError::InfiniteIndex);
    }
    let mut coords = Vec::with_capacity(sub.rank());
    for v in &sub.vectors {
        let c = sup
            .coordinates(&super::to_qvec(v))
            .ok_or(LinalgError::NotSublattice)?;
        if c.iter().any(|x| !x.is_integer()) {
            return Err(LinalgError::NotSublattice);
        }
        coords.push(c);
    }
    let d = det_q(&coords);
    if d.is_zero() {
        return Err(LinalgError::InfiniteIndex);
    }
    Ok(d.abs().to_integer())
}

/// Coordinates on `Z^n / L` for a saturated sublattice `L` of rank `k`.
///
/// Built from a unimodular basis `b_1..b_n` of `Z^n` whose first `k` vectors
/// span `L`; the quotient coordinates of `x` are its last `n - k` coordinates
/// in that basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientChart {
    sub_rank: usize,
    /// Row `i` is `b_i`.
    basis: IntMatrix,
    /// `x * to_coords` gives the coordinates of `x` in the basis.
    to_coords: IntMatrix,
}

pub fn quotient_coordinates(ambient: usize, sub: &LatticeBasis) -> Result<QuotientChart, LinalgError> {
    if sub.ambient != ambient {
        return Err(LinalgError::DimensionMismatch { expected: ambient, found: sub.ambient });
    }
    let sf = smith_normal_form(&sub.vectors, ambient);
    if sf.invariant_factors.len() != sub.rank() {
        return Err(LinalgError::Dependent);
    }
    let index: Integer = sf.invariant_factors.iter().product();
    if !index.is_one() {
        return Err(LinalgError::NotSaturated { index });
    }
    Ok(QuotientChart {
        sub_rank: sub.rank(),
        basis: unimodular_inverse(&sf.v),
        to_coords: sf.v,
    })
}

impl QuotientChart {
    pub fn ambient_rank(&self) -> usize {
        self.basis.len()
    }

    pub fn sub_rank(&self) -> usize {
        self.sub_rank
    }

    pub fn quotient_rank(&self) -> usize {
        self.ambient_rank() - self.sub_rank
    }

    /// The saturated sublattice the chart divides out.
    pub fn sub_basis(&self) -> LatticeBasis {
        LatticeBasis {
            ambient: self.ambient_rank(),
            vectors: self.basis[..self.sub_rank].to_vec(),
        }
    }

    /// Integer basis of the annihilator of the sublattice in the dual lattice,
    /// dual to the quotient coordinates.
    pub fn annihilator_basis(&self) -> Vec<IntVec> {
        (self.sub_rank..self.ambient_rank())
            .map(|j| self.to_coords.iter().map(|row| row[j].clone()).collect())
            .collect()
    }

    pub fn project(&self, x: &[Integer]) -> IntVec {
        (self.sub_rank..self.ambient_rank())
            .map(|j| x.iter().zip(&self.to_coords).map(|(xi, row)| xi * &row[j]).sum())
            .collect()
    }

    pub fn project_q(&self, x: &[Rational]) -> QVec {
        (self.sub_rank..self.ambient_rank())
            .map(|j| {
                x.iter()
                    .zip(&self.to_coords)
                    .fold(Rational::zero(), |acc, (xi, row)| acc + xi * &row[j])
            })
            .collect()
    }

    /// The canonical lift of quotient coordinates back to `Z^n`.
    pub fn section(&self, y: &[Integer]) -> IntVec {
        let n = self.ambient_rank();
        let mut x = vec![Integer::zero(); n];
        for (yj, b) in y.iter().zip(&self.basis[self.sub_rank..]) {
            for (xi, bi) in x.iter_mut().zip(b) {
                *xi += yj * bi;
            }
        }
        x
    }

    pub fn section_q(&self, y: &[Rational]) -> QVec {
        let n = self.ambient_rank();
        let mut x = vec![Rational::zero(); n];
        for (yj, b) in y.iter().zip(&self.basis[self.sub_rank..]) {
            for (xi, bi) in x.iter_mut().zip(b) {
                *xi += yj * bi;
            }
        }
        x
    }
}
