use std::sync::Arc;

use num::{One, Zero};
use proptest::prelude::*;

use super::*;
use crate::complements::ComplementKind;
use crate::divisor::{degree, divisor_cycle};
use crate::fixtures;
use crate::linalg::{identity_q, rat, QMatrix};
use crate::polytope::polytope_of;

fn q(v: &[i64]) -> QVec {
    v.iter().map(|&x| rat(x, 1)).collect()
}

/// The divisor with coefficient one on every ray, for any complete fan.
fn ones_divisor(fan: &Arc<Fan>) -> QCartierDivisor {
    let local = fan
        .maximal_cones()
        .iter()
        .map(|&c| {
            let rays: QMatrix = fan.ray_vectors(c).iter().map(|v| crate::linalg::to_qvec(v)).collect();
            let ones = vec![Rational::one(); rays.len()];
            crate::linalg::solve_rational(&rays, &ones, fan.rank()).unwrap().0
        })
        .collect();
    QCartierDivisor::from_maximal(fan.clone(), local).unwrap()
}

fn ray_divisor(fan: &Arc<Fan>, coefficients: &[i64]) -> QCartierDivisor {
    QCartierDivisor::from_ray_coefficients(fan.clone(), &q(coefficients)).unwrap()
}

fn hyperplane_power(n: usize, psi: &Complements) -> Rational {
    let fan = psi.fan().clone();
    let h = QCartierDivisor::prime(fan.clone(), 0).unwrap();
    degree(&power(&h, n as u32, &Cycle::fundamental(fan), psi).unwrap()).unwrap()
}

/// A flag generic for every cone of the fan, found by a fixed search.
fn generic_flag(fan: &Arc<Fan>) -> Complements {
    let n = fan.rank();
    for shift in 1..50i64 {
        let basis: QMatrix = (0..n)
            .map(|i| (0..n).map(|j| rat(((i + 2) as i64).pow(j as u32) + shift * (i == j) as i64, 1)).collect())
            .collect();
        if let Ok(psi) = Complements::flag(fan.clone(), basis) {
            return psi;
        }
    }
    panic!("no generic flag found");
}

#[test]
fn hyperplane_degree_on_projective_space() {
    for n in 1..=3 {
        let fan = Arc::new(fixtures::projective_space(n));
        assert_eq!(hyperplane_power(n, &Complements::standard(fan.clone())), Rational::one());
        let gram = fixtures::projective_space_gram(n);
        assert_eq!(hyperplane_power(n, &Complements::inner_product(fan.clone(), gram).unwrap()), Rational::one());
        assert_eq!(hyperplane_power(n, &generic_flag(&fan)), Rational::one());
    }
}

#[test]
fn divisor_times_fundamental_class_is_its_weil_divisor() {
    let fan = Arc::new(fixtures::hirzebruch(2));
    let d = ray_divisor(&fan, &[1, -2, 3, 1]);
    let psi = Complements::standard(fan.clone());
    assert_eq!(intersect(&d, &Cycle::fundamental(fan), &psi).unwrap(), divisor_cycle(&d));
}

#[test]
fn self_intersection_of_exceptional_curve() {
    // Rays (1,0),(0,1),(1,1): the third ray is the exceptional curve.
    let fan = Arc::new(fixtures::blown_up_plane());
    let e = QCartierDivisor::prime(fan.clone(), 2).unwrap();
    for psi in [Complements::standard(fan.clone()), generic_flag(&fan)] {
        let z = power(&e, 2, &Cycle::fundamental(fan.clone()), &psi).unwrap();
        assert_eq!(degree(&z).unwrap(), rat(-1, 1));
    }
}

#[test]
fn hirzebruch_intersection_numbers() {
    // On F_a with rays (1,0),(0,1),(-1,a),(0,-1): D_2^2 = -a, D_4^2 = a, D_1^2 = 0.
    for a in 0..=3 {
        let fan = Arc::new(fixtures::hirzebruch(a));
        let psi = Complements::standard(fan.clone());
        let x = Cycle::fundamental(fan.clone());
        let sq = |i: usize| {
            let d = QCartierDivisor::prime(fan.clone(), i).unwrap();
            degree(&power(&d, 2, &x, &psi).unwrap()).unwrap()
        };
        assert_eq!(sq(0), Rational::zero());
        assert_eq!(sq(1), rat(-a, 1));
        assert_eq!(sq(3), rat(a, 1));
    }
}

#[test]
fn weighted_plane_has_fractional_self_intersection() {
    // Rays (1,0),(0,1),(-1,-2): weights (1,2,1), so D_1^2 = 1/2.
    let fan = Arc::new(fixtures::weighted_projective_plane());
    let d = QCartierDivisor::prime(fan.clone(), 0).unwrap();
    let psi = Complements::standard(fan.clone());
    let z = power(&d, 2, &Cycle::fundamental(fan), &psi).unwrap();
    assert_eq!(degree(&z).unwrap(), rat(1, 2));
}

#[test]
fn top_degree_matches_lattice_volume_for_ample_divisors() {
    let cases: Vec<(Fan, Vec<i64>)> = vec![
        (fixtures::projective_space(2), vec![1, 1, 1]),
        (fixtures::projective_space(3), vec![2, 0, 0, 1]),
        (fixtures::product_of_projective_lines(3), vec![1, 2, 1, 1, 1, 3]),
        (fixtures::hirzebruch(1), vec![1, 1, 1, 1]),
        (fixtures::hirzebruch(2), vec![1, 0, 1, 3]),
    ];
    for (fan, coefficients) in cases {
        let fan = Arc::new(fan);
        let n = fan.rank();
        let d = ray_divisor(&fan, &coefficients);
        let polytope = polytope_of(&d).unwrap();
        let fact = (1..=n as i64).product::<i64>();
        let psi = Complements::standard(fan.clone());
        let top = degree(&power(&d, n as u32, &Cycle::fundamental(fan.clone()), &psi).unwrap()).unwrap();
        assert_eq!(top, polytope.volume() * rat(fact, 1));
    }
}

#[test]
fn proper_intersection_ignores_complements() {
    let fan = Arc::new(fixtures::hirzebruch(2));
    // D_3 meets V(ρ_1) properly: the cones over ρ_1 avoid ρ_3.
    let d = QCartierDivisor::prime(fan.clone(), 2).unwrap();
    let rho = fan.ray_cone(0);
    assert!(intersects_properly(&d, rho));
    let expected = proper_restriction_cycle(&d, rho).unwrap();
    for psi in [Complements::standard(fan.clone()), generic_flag(&fan)] {
        assert_eq!(intersect(&d, &Cycle::orbit(fan.clone(), rho), &psi).unwrap(), expected);
    }
    let improper = QCartierDivisor::prime(fan.clone(), 0).unwrap();
    assert!(matches!(
        proper_restriction_cycle(&improper, rho),
        Err(IntersectionError::NotProper(_))
    ));
}

#[test]
fn sequential_and_parallel_agree() {
    let fan = Arc::new(fixtures::cube_fan());
    let d = ones_divisor(&fan);
    let e = d.scaled(&rat(2, 1)).sum(&QCartierDivisor::principal(fan.clone(), q(&[1, 2, -1]))).unwrap();
    let psi = Complements::standard(fan.clone());
    let p = Polynomial::parse("d1^2*d2 + d2^3 - 2*d1", "d", 2).unwrap();
    let x = Cycle::fundamental(fan);
    let a = evaluate_polynomial_with(Exec::Sequential, &p, &[d.clone(), e.clone()], &x, &psi).unwrap();
    let b = evaluate_polynomial_with(Exec::Parallel, &p, &[d, e], &x, &psi).unwrap();
    assert_eq!(a, b);
}

#[test]
fn evaluation_checks_arity_and_fans() {
    let fan = Arc::new(fixtures::projective_space(2));
    let other = Arc::new(fixtures::hirzebruch(0));
    let d = QCartierDivisor::prime(fan.clone(), 0).unwrap();
    let psi = Complements::standard(fan.clone());
    let p = Polynomial::var(2, 0);
    assert_eq!(
        evaluate_polynomial(&p, &[d.clone()], &Cycle::fundamental(fan.clone()), &psi).unwrap_err(),
        IntersectionError::WrongArity { expected: 1, found: 2 }
    );
    assert_eq!(
        intersect(&d, &Cycle::fundamental(other), &psi).unwrap_err(),
        IntersectionError::FanMismatch
    );
}

#[test]
fn localization_matches_global_coefficients() {
    for (name, fan) in fixtures::catalogue() {
        let fan = Arc::new(fan);
        if !fan.is_simplicial() {
            continue;
        }
        let psi = generic_flag(&fan);
        let r = fan.num_rays() as i64;
        let d = ray_divisor(&fan, &(0..r).map(|i| (i * 7 + 3) % 5 - 2).collect::<Vec<_>>());
        let e = ray_divisor(&fan, &(0..r).map(|i| (i * 3 + 1) % 4 - 1).collect::<Vec<_>>());
        for sigma in fan.cone_ids() {
            let start = Cycle::orbit(fan.clone(), sigma);
            let once = intersect(&e, &start, &psi).unwrap();
            let twice = intersect(&d, &once, &psi).unwrap();
            for tau in fan.cone_ids().filter(|&t| fan.is_face(sigma, t)) {
                let k = fan.dim(tau) - fan.dim(sigma);
                let (divisors, global) = match k {
                    1 => (vec![e.clone()], once.coefficient(tau)),
                    2 => (vec![d.clone(), e.clone()], twice.coefficient(tau)),
                    _ => continue,
                };
                assert_eq!(localize_coefficient(tau, sigma, &divisors, &psi).unwrap(), global, "{name}");
            }
        }
    }
}

#[test]
fn chain_decomposition_sums_to_the_top_coefficient() {
    for fan in [fixtures::projective_space(2), fixtures::hirzebruch(3), fixtures::projective_space(3), fixtures::square_cone()] {
        let fan = Arc::new(fan);
        let r = fan.num_rays() as i64;
        let d = if fan.is_simplicial() {
            ray_divisor(&fan, &(0..r).map(|i| (i * 5 + 2) % 7 - 3).collect::<Vec<_>>())
        } else {
            QCartierDivisor::principal(fan.clone(), q(&[1, -2, 3]))
        };
        let psi_list = if fan.is_simplicial() {
            vec![Complements::standard(fan.clone()), generic_flag(&fan)]
        } else {
            vec![Complements::standard(fan.clone())]
        };
        for psi in psi_list {
            let top = power(&d, fan.rank() as u32, &Cycle::fundamental(fan.clone()), &psi).unwrap();
            for &sigma in fan.maximal_cones() {
                let dec = dn_volume_decomposition(&d, sigma, &psi).unwrap();
                assert_eq!(dec.total, top.coefficient(sigma));
                let fact = (1..=fan.rank()).product::<usize>();
                if fan.cone(sigma).is_simplicial() {
                    assert_eq!(dec.terms.len(), fact);
                }
                assert!(dec.terms.iter().all(ChainTerm::is_consistent));
            }
        }
    }
}

#[test]
fn flag_formulas_agree() {
    for fan in [fixtures::projective_space(2), fixtures::weighted_projective_plane(), fixtures::projective_space(3)] {
        let fan = Arc::new(fan);
        let n = fan.rank();
        let psi = generic_flag(&fan);
        let r = fan.num_rays() as i64;
        let d = ray_divisor(&fan, &(0..r).map(|i| (i * 5 + 1) % 4 - 1).collect::<Vec<_>>());
        let top = power(&d, n as u32, &Cycle::fundamental(fan.clone()), &psi).unwrap();
        let xn = Polynomial::monomial(1, vec![n as u32], Rational::one());
        let ComplementKind::Flag { basis } = psi.kind() else { unreachable!() };
        for &sigma in fan.maximal_cones() {
            let simplex = flag_simplex_coefficient(&d, sigma, &psi).unwrap();
            let closed = flag_closed_form(&xn, &[d.clone()], sigma, &psi).unwrap();
            let symbolic = symbolic_flag_coefficient(&xn, &[d.clone()], sigma).unwrap();
            let w = flag_normal(&fan, basis, sigma).unwrap();
            let coords = normal_coordinates(&fan, sigma, &w).unwrap();
            assert_eq!(simplex.value, top.coefficient(sigma));
            assert_eq!(closed, top.coefficient(sigma));
            assert_eq!(symbolic.evaluate(&coords), Some(closed));
        }
    }
}

#[test]
fn flag_closed_form_on_lower_cones() {
    let fan = Arc::new(fixtures::hirzebruch(1));
    let psi = generic_flag(&fan);
    let d = ray_divisor(&fan, &[1, 0, 2, -1]);
    let once = intersect(&d, &Cycle::fundamental(fan.clone()), &psi).unwrap();
    let x = Polynomial::var(1, 0);
    for sigma in fan.cones_of_dim(1) {
        assert_eq!(flag_closed_form(&x, &[d.clone()], sigma, &psi).unwrap(), once.coefficient(sigma));
    }
}

#[test]
fn flag_formulas_require_flags_and_simplicial_cones() {
    let fan = Arc::new(fixtures::square_cone());
    let d = QCartierDivisor::principal(fan.clone(), q(&[1, 0, 0]));
    let top = fan.maximal_cones()[0];
    let std = Complements::standard(fan.clone());
    assert_eq!(flag_simplex_coefficient(&d, top, &std).unwrap_err(), IntersectionError::NotSimplicial(vec![0, 1, 2, 3]));
    let flag = Complements::flag(fan.clone(), identity_q(3));
    if let Ok(flag) = flag {
        assert!(matches!(flag_simplex_coefficient(&d, top, &flag), Err(IntersectionError::NotSimplicial(_))));
    }
}

fn polarization(divisors: &[QCartierDivisor], psi: &Complements, x: &Cycle) -> Cycle {
    let n = divisors.len();
    let fact = (1..=n as i64).product::<i64>();
    let mut out = Cycle::zero(x.fan().clone());
    for mask in 1u32..(1 << n) {
        let members: Vec<&QCartierDivisor> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| &divisors[i]).collect();
        let sum = members[1..].iter().fold(members[0].clone(), |acc, d| acc.sum(d).unwrap());
        let sign = if (n - members.len()) % 2 == 0 { 1 } else { -1 };
        out.add_cycle(&power(&sum, n as u32, x, psi).unwrap().scaled(&rat(sign, fact)));
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn products_are_multilinear_and_polarize(
        a in prop::collection::vec(-3i64..4, 4),
        b in prop::collection::vec(-3i64..4, 4),
        s in -3i64..4,
    ) {
        let fan = Arc::new(fixtures::hirzebruch(2));
        let psi = Complements::standard(fan.clone());
        let x = Cycle::fundamental(fan.clone());
        let d = ray_divisor(&fan, &a);
        let e = ray_divisor(&fan, &b);
        let de = intersect(&d, &intersect(&e, &x, &psi).unwrap(), &psi).unwrap();
        prop_assert_eq!(&polarization(&[d.clone(), e.clone()], &psi, &x), &de);
        let combo = d.sum(&e.scaled(&rat(s, 1))).unwrap();
        let lhs = intersect(&combo, &x, &psi).unwrap();
        let rhs = intersect(&d, &x, &psi).unwrap().sum(&intersect(&e, &x, &psi).unwrap().scaled(&rat(s, 1)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn principal_divisors_have_degree_zero_products(
        m in prop::collection::vec(-3i64..4, 2),
        a in prop::collection::vec(-3i64..4, 4),
    ) {
        let fan = Arc::new(fixtures::hirzebruch(1));
        let psi = Complements::standard(fan.clone());
        let x = Cycle::fundamental(fan.clone());
        let p = QCartierDivisor::principal(fan.clone(), q(&m));
        let d = ray_divisor(&fan, &a);
        let z = intersect(&p, &intersect(&d, &x, &psi).unwrap(), &psi).unwrap();
        prop_assert_eq!(degree(&z).unwrap(), Rational::zero());
    }
}
