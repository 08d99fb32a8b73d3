//! Standard fans used in tests, benchmarks and examples.

use itertools::Itertools;
use num::{One, Zero};

use crate::fan::{build_fan, Fan};
use crate::linalg::{dot, int, solve_rational, IntVec, QMatrix, QVec, Rational};

fn iv(v: &[i64]) -> IntVec {
    v.iter().map(|&x| int(x)).collect()
}

fn unit(n: usize, i: usize) -> IntVec {
    (0..n).map(|j| int(i64::from(i == j))).collect()
}

/// The single cone spanned by the standard basis.
pub fn affine_space(n: usize) -> Fan {
    let rays = (0..n).map(|i| unit(n, i)).collect();
    build_fan(n, rays, vec![(0..n).collect()]).expect("valid fixture")
}

/// Rays `e_1, ..., e_n, -(e_1 + ... + e_n)`; every proper subset spans a cone.
pub fn projective_space(n: usize) -> Fan {
    let mut rays: Vec<IntVec> = (0..n).map(|i| unit(n, i)).collect();
    rays.push(vec![int(-1); n]);
    let cones = (0..=n).combinations(n).collect();
    build_fan(n, rays, cones).expect("valid fixture")
}

/// Inner product on `M_Q` for [`projective_space`] induced by viewing `N` as
/// the sum-zero sublattice of `Z^(n+1)` with rays `e_i - e_(i+1)` and
/// identifying `M_Q` with the orthogonal complement of `(1, ..., 1)`.
pub fn projective_space_gram(n: usize) -> QMatrix {
    // Representative in Q^(n+1) of the dual basis vector m_i.
    let reps: Vec<QVec> = (0..n)
        .map(|i| {
            let mut a: QMatrix = (0..n)
                .map(|j| {
                    (0..=n)
                        .map(|k| {
                            if k == j {
                                Rational::one()
                            } else if k == j + 1 {
                                -Rational::one()
                            } else {
                                Rational::zero()
                            }
                        })
                        .collect()
                })
                .collect();
            a.push(vec![Rational::one(); n + 1]);
            let mut b: QVec = (0..n).map(|j| Rational::from_integer(int(i64::from(i == j)))).collect();
            b.push(Rational::zero());
            solve_rational(&a, &b, n + 1).expect("square nonsingular system").0
        })
        .collect();
    reps.iter().map(|x| reps.iter().map(|y| dot(x, y)).collect()).collect()
}

/// `(P^1)^k` with rays `e_1..e_k` followed by `-e_1..-e_k`.
pub fn product_of_projective_lines(k: usize) -> Fan {
    let mut rays: Vec<IntVec> = (0..k).map(|i| unit(k, i)).collect();
    rays.extend((0..k).map(|i| unit(k, i).into_iter().map(|x| -x).collect::<IntVec>()));
    let cones = (0..k)
        .map(|_| [0usize, 1])
        .multi_cartesian_product()
        .map(|signs| signs.iter().enumerate().map(|(i, s)| i + s * k).collect())
        .collect();
    build_fan(k, rays, cones).expect("valid fixture")
}

/// Hirzebruch surface with rays `(1,0), (0,1), (-1,a), (0,-1)`.
pub fn hirzebruch(a: i64) -> Fan {
    let rays = vec![iv(&[1, 0]), iv(&[0, 1]), iv(&[-1, a]), iv(&[0, -1])];
    build_fan(2, rays, vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]]).expect("valid fixture")
}

/// Complete simplicial surface with one singular cone of multiplicity two.
pub fn weighted_projective_plane() -> Fan {
    let rays = vec![iv(&[1, 0]), iv(&[0, 1]), iv(&[-1, -2])];
    build_fan(2, rays, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).expect("valid fixture")
}

/// The affine plane subdivided along `(1,1)`.
pub fn blown_up_plane() -> Fan {
    let rays = vec![iv(&[1, 0]), iv(&[0, 1]), iv(&[1, 1])];
    build_fan(2, rays, vec![vec![0, 2], vec![1, 2]]).expect("valid fixture")
}

/// A two-dimensional cone of multiplicity two.
pub fn singular_plane_cone() -> Fan {
    build_fan(2, vec![iv(&[1, 0]), iv(&[1, 2])], vec![vec![0, 1]]).expect("valid fixture")
}

/// The cone over a square: four rays, not simplicial.
pub fn square_cone() -> Fan {
    let rays = vec![iv(&[1, 0, 1]), iv(&[0, 1, 1]), iv(&[-1, 0, 1]), iv(&[0, -1, 1])];
    build_fan(3, rays, vec![vec![0, 1, 2, 3]]).expect("valid fixture")
}

/// The complete fan over the faces of the cube `[-1,1]^3`.
pub fn cube_fan() -> Fan {
    let rays: Vec<IntVec> = (0..3)
        .map(|_| [-1i64, 1])
        .multi_cartesian_product()
        .map(|v| iv(&v))
        .collect();
    let cones = (0..3)
        .flat_map(|axis| [-1i64, 1].into_iter().map(move |s| (axis, s)))
        .map(|(axis, s)| {
            (0..rays.len()).filter(|&i| rays[i][axis] == int(s)).collect()
        })
        .collect();
    build_fan(3, rays, cones).expect("valid fixture")
}

/// Named fixtures covering smooth, singular, complete, affine and non-simplicial cases.
pub fn catalogue() -> Vec<(&'static str, Fan)> {
    vec![
        ("affine-line", affine_space(1)),
        ("affine-plane", affine_space(2)),
        ("affine-3-space", affine_space(3)),
        ("projective-line", projective_space(1)),
        ("projective-plane", projective_space(2)),
        ("projective-3-space", projective_space(3)),
        ("p1xp1", product_of_projective_lines(2)),
        ("p1xp1xp1", product_of_projective_lines(3)),
        ("hirzebruch-1", hirzebruch(1)),
        ("hirzebruch-2", hirzebruch(2)),
        ("weighted-plane", weighted_projective_plane()),
        ("blown-up-plane", blown_up_plane()),
        ("singular-plane-cone", singular_plane_cone()),
        ("square-cone", square_cone()),
        ("cube-fan", cube_fan()),
    ]
}
