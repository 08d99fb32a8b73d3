//! Hermite and Smith normal forms over the integers.

use num::{Integer as _, One, Signed, Zero};

use super::rational::{IntMatrix, Integer};

/// `u * a = h` with `u` unimodular and `h` in reduced row echelon form:
/// pivots are positive and the entries above each pivot lie in `[0, pivot)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermiteForm {
    pub h: IntMatrix,
    pub u: IntMatrix,
    pub rank: usize,
}

/// `u * a * v = s` with `u`, `v` unimodular and `s` diagonal, `d_1 | d_2 | ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    /// The nonzero diagonal entries, all positive.
    pub invariant_factors: Vec<Integer>,
}

pub(crate) fn identity_int(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Integer::one() } else { Integer::zero() })
                .collect()
        })
        .collect()
}

/// `row[i] -= q * row[j]`.
fn row_sub(m: &mut IntMatrix, i: usize, j: usize, q: &Integer) {
    if q.is_zero() {
        return;
    }
    let src = m[j].clone();
    for (x, y) in m[i].iter_mut().zip(&src) {
        *x -= q * y;
    }
}

/// `col[i] -= q * col[j]`.
fn col_sub(m: &mut IntMatrix, i: usize, j: usize, q: &Integer) {
    if q.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        let y = row[j].clone();
        row[i] -= q * y;
    }
}

fn negate_row(m: &mut IntMatrix, i: usize) {
    for x in m[i].iter_mut() {
        *x = -x.clone();
    }
}

fn swap_cols(m: &mut IntMatrix, i: usize, j: usize) {
    for row in m.iter_mut() {
        row.swap(i, j);
    }
}

pub fn hermite_normal_form(a: &IntMatrix, cols: usize) -> HermiteForm {
    let m = a.len();
    let mut h = a.clone();
    let mut u = identity_int(m);
    let mut r = 0;
    for c in 0..cols {
        if r == m {
            break;
        }
        loop {
            let Some(p) = (r..m)
                .filter(|&i| !h[i][c].is_zero())
                .min_by_key(|&i| h[i][c].abs())
            else {
                break;
            };
            h.swap(r, p);
            u.swap(r, p);
            let mut cleared = true;
            for i in r + 1..m {
                if !h[i][c].is_zero() {
                    let q = h[i][c].div_floor(&h[r][c]);
                    row_sub(&mut h, i, r, &q);
                    row_sub(&mut u, i, r, &q);
                    cleared &= h[i][c].is_zero();
                }
            }
            if cleared {
                break;
            }
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            negate_row(&mut h, r);
            negate_row(&mut u, r);
        }
        for i in 0..r {
            let q = h[i][c].div_floor(&h[r][c]);
            row_sub(&mut h, i, r, &q);
            row_sub(&mut u, i, r, &q);
        }
        r += 1;
    }
    HermiteForm { h, u, rank: r }
}

pub fn smith_normal_form(a: &IntMatrix, cols: usize) -> SmithForm {
    let m = a.len();
    let n = cols;
    let mut s = a.clone();
    let mut u = identity_int(m);
    let mut v = identity_int(n);
    let mut factors = Vec::new();
    for t in 0..m.min(n) {
        loop {
            let pivot = (t..m)
                .flat_map(|i| (t..n).map(move |j| (i, j)))
                .filter(|&(i, j)| !s[i][j].is_zero())
                .min_by_key(|&(i, j)| s[i][j].abs());
            let Some((pi, pj)) = pivot else {
                return SmithForm { s, u, v, invariant_factors: factors };
            };
            s.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut s, t, pj);
            swap_cols(&mut v, t, pj);
            let mut cleared = true;
            for i in t + 1..m {
                let q = s[i][t].div_floor(&s[t][t]);
                row_sub(&mut s, i, t, &q);
                row_sub(&mut u, i, t, &q);
                cleared &= s[i][t].is_zero();
            }
            for j in t + 1..n {
                let q = s[t][j].div_floor(&s[t][t]);
                col_sub(&mut s, j, t, &q);
                col_sub(&mut v, j, t, &q);
                cleared &= s[t][j].is_zero();
            }
            if !cleared {
                continue;
            }
            let offender = (t + 1..m).find(|&i| {
                (t + 1..n).any(|j| !s[i][j].is_multiple_of(&s[t][t]))
            });
            match offender {
                Some(i) => {
                    row_sub(&mut s, t, i, &-Integer::one());
                    row_sub(&mut u, t, i, &-Integer::one());
                }
                None => break,
            }
        }
        if s[t][t].is_negative() {
            negate_row(&mut s, t);
            negate_row(&mut u, t);
        }
        factors.push(s[t][t].clone());
    }
    SmithForm { s, u, v, invariant_factors: factors }
}
