use num::{One, Zero};

use super::rational::{IntMatrix, Integer, QMatrix, QVec, Rational};
use super::LinalgError;

pub fn to_qmatrix(a: &IntMatrix) -> QMatrix {
    a.iter()
        .map(|row| row.iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect()
}

pub fn transpose<T: Clone>(a: &[Vec<T>], cols: usize) -> Vec<Vec<T>> {
    (0..cols)
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn identity_q(n: usize) -> QMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                .collect()
        })
        .collect()
}

pub fn mat_vec_q(a: &QMatrix, x: &[Rational]) -> QVec {
    a.iter().map(|row| super::dot(row, x)).collect()
}

/// `a` is `m x k`, `b` is `k x n`.
pub fn mat_mul_q(a: &QMatrix, b: &QMatrix, n: usize) -> QMatrix {
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(Rational::zero(), |acc, (x, brow)| acc + x * &brow[j])
                })
                .collect()
        })
        .collect()
}

/// Reduced row echelon form and the pivot columns.
pub fn rref(a: &QMatrix, cols: usize) -> (QMatrix, Vec<usize>) {
    let mut m = a.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    (m, pivots)
}

pub fn rank_q(a: &QMatrix, cols: usize) -> usize {
    rref(a, cols).1.len()
}

/// Basis of `{x : a x = 0}`, one vector per free column.
pub fn kernel_q(a: &QMatrix, cols: usize) -> Vec<QVec> {
    let (r, pivots) = rref(a, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rational::zero(); cols];
            x[f] = Rational::one();
            for (row, &p) in pivots.iter().enumerate() {
                x[p] = -r[row][f].clone();
            }
            x
        })
        .collect()
}

/// A particular solution of `a x = b` (free variables set to zero) and a kernel basis.
pub fn solve_rational(
    a: &QMatrix,
    b: &[Rational],
    cols: usize,
) -> Result<(QVec, Vec<QVec>), LinalgError> {
    if a.len() != b.len() {
        return Err(LinalgError::DimensionMismatch { expected: a.len(), found: b.len() });
    }
    let augmented: QMatrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&augmented, cols + 1);
    if pivots.last() == Some(&cols) {
        return Err(LinalgError::Inconsistent);
    }
    let mut x = vec![Rational::zero(); cols];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = r[row][cols].clone();
    }
    Ok((x, kernel_q(a, cols)))
}

pub fn det_q(a: &QMatrix) -> Rational {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= &m[c][c];
        let pivot_row = m[c].clone();
        for row in m.iter_mut().skip(c + 1) {
            if !row[c].is_zero() {
                let f = &row[c] / &pivot_row[c];
                for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                    *x -= &f * y;
                }
            }
        }
    }
    det
}

pub fn det_int(a: &IntMatrix) -> Integer {
    det_q(&to_qmatrix(a)).to_integer()
}

pub fn inverse_q(a: &QMatrix) -> Result<QMatrix, LinalgError> {
    let n = a.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let augmented: QMatrix = a
        .iter()
        .zip(identity_q(n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    let (r, pivots) = rref(&augmented, 2 * n);
    if pivots.len() < n || pivots[n - 1] >= n {
        return Err(LinalgError::Singular);
    }
    Ok(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Indices of a maximal linearly independent set of rows, chosen greedily.
pub fn independent_rows(a: &QMatrix, cols: usize) -> Vec<usize> {
    let mut chosen = Vec::new();
    let mut rows: QMatrix = Vec::new();
    for (i, v) in a.iter().enumerate() {
        rows.push(v.clone());
        if rank_q(&rows, cols) == rows.len() {
            chosen.push(i);
        } else {
            rows.pop();
        }
    }
    chosen
}
