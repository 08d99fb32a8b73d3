use std::sync::Arc;

use num::One;
use proptest::prelude::*;

use super::*;
use crate::divisor::{degree, divisor_cycle};
use crate::fan::{ConeId, Fan};
use crate::fixtures;
use crate::linalg::{identity_q, rat, QMatrix, Rational};

fn standard(fan: Fan) -> Complements {
    Complements::standard(Arc::new(fan))
}

fn cone(fan: &Fan, rays: &[usize]) -> ConeId {
    fan.cone_by_rays(rays).unwrap()
}

fn poly(text: &str, r: usize) -> Polynomial {
    Polynomial::parse(text, "y", r).unwrap()
}

fn projective_space_presentation(n: usize) -> (Complements, QMatrix) {
    let gram = fixtures::projective_space_gram(n);
    let psi = Complements::inner_product(Arc::new(fixtures::projective_space(n)), gram.clone()).unwrap();
    (psi, gram)
}

#[test]
fn cycles_as_polynomials() {
    let psi = standard(fixtures::projective_space(2));
    let fan = psi.fan().clone();
    assert_eq!(cycle_as_polynomial(&Cycle::fundamental(fan.clone()), &psi).unwrap(), Polynomial::one(3));
    let z = Cycle::orbit(fan.clone(), cone(&fan, &[0, 2]));
    assert_eq!(cycle_as_polynomial(&z, &psi).unwrap(), poly("y1*y3", 3));

    let psi = standard(fixtures::affine_space(2));
    let fan = psi.fan().clone();
    let z = Cycle::orbit(fan.clone(), cone(&fan, &[0, 1]));
    assert_eq!(cycle_as_polynomial(&z, &psi).unwrap(), poly("y1*y2", 2));
}

#[test]
fn products_on_the_projective_plane() {
    let psi = standard(fixtures::projective_space(2));
    let fan = psi.fan().clone();
    let x = Cycle::fundamental(fan.clone());
    let rho3 = Cycle::orbit(fan.clone(), fan.ray_cone(2));
    assert_eq!(product(&x, &rho3, &psi).unwrap(), rho3);
    let expected = Cycle::from_terms(
        fan.clone(),
        [(cone(&fan, &[0, 2]), rat(1, 2)), (cone(&fan, &[1, 2]), rat(1, 2))],
    );
    assert_eq!(product(&rho3, &rho3, &psi).unwrap(), expected);
    let point = Cycle::orbit(fan.clone(), cone(&fan, &[0, 1]));
    assert!(product(&point, &rho3, &psi).unwrap().is_zero());
}

#[test]
fn non_simplicial_fans_are_rejected() {
    let psi = standard(fixtures::square_cone());
    let x = Cycle::fundamental(psi.fan().clone());
    assert_eq!(cycle_as_polynomial(&x, &psi).unwrap_err(), RingError::NotSimplicial);
}

#[test]
fn stanley_reisner_examples() {
    assert_eq!(stanley_reisner_generators(&fixtures::projective_space(2)), vec![poly("y1*y2*y3", 3)]);
    assert!(stanley_reisner_generators(&fixtures::affine_space(2)).is_empty());
    let mut gens = stanley_reisner_generators(&fixtures::product_of_projective_lines(2));
    gens.sort_by_key(|p| p.to_text("y"));
    assert_eq!(gens, vec![poly("y1*y3", 4), poly("y2*y4", 4)]);
}

#[test]
fn quadric_examples() {
    let fan = Arc::new(fixtures::affine_space(2));
    assert_eq!(j_generators(&fan, &identity_q(2)).unwrap(), vec![poly("y1^2", 2), poly("y2^2", 2)]);
    let fan = Arc::new(fixtures::affine_space(3));
    assert_eq!(
        j_generators(&fan, &identity_q(3)).unwrap(),
        vec![poly("y1^2", 3), poly("y2^2", 3), poly("y3^2", 3)]
    );
    // Cyclic neighbours only, with ratio -1/2 against the square.
    for n in 2..=4 {
        let fan = Arc::new(fixtures::projective_space(n));
        let gens = j_generators(&fan, &fixtures::projective_space_gram(n)).unwrap();
        let r = n + 1;
        for (j, g) in gens.iter().enumerate() {
            let prev = (j + r - 1) % r + 1;
            let next = (j + 1) % r + 1;
            let expected = poly(&format!("y{0}*(y{0} - 1/2*y{1} - 1/2*y{2})", j + 1, prev, next), r);
            assert_eq!(g.scale(&g.coefficient(&{
                let mut e = vec![0; r];
                e[j] = 2;
                e
            }).recip()), expected);
        }
    }
    let not_pd = vec![vec![rat(1, 1), rat(2, 1)], vec![rat(2, 1), rat(1, 1)]];
    assert!(j_generators(&Arc::new(fixtures::affine_space(2)), &not_pd).is_err());
}

#[test]
fn reduction_examples() {
    let fan = Arc::new(fixtures::projective_space(2));
    let pres = Presentation::new(fan.clone(), &identity_q(2)).unwrap();
    assert_eq!(pres.reduce(&poly("y1*y3", 3)), poly("y1*y3", 3));
    assert_eq!(pres.reduce(&poly("y3^2", 3)), poly("1/2*y1*y3 + 1/2*y2*y3", 3));
    assert!(pres.reduce(&poly("y1*y2*y3^4 - 3*y1^2*y2*y3", 3)).is_zero());
    // The reduced form of y3^2 matches the product of orbit closures.
    let psi = Complements::standard(fan.clone());
    let rho3 = Cycle::orbit(fan.clone(), fan.ray_cone(2));
    assert_eq!(
        evaluate_on_fundamental(&pres.reduce(&poly("y3^2", 3)), &psi).unwrap(),
        product(&rho3, &rho3, &psi).unwrap()
    );
}

#[test]
fn presentations_verify() {
    let cases: Vec<(Fan, QMatrix)> = vec![
        (fixtures::projective_space(2), identity_q(2)),
        (fixtures::product_of_projective_lines(2), identity_q(2)),
        (fixtures::affine_space(3), identity_q(3)),
        (fixtures::projective_space(2), fixtures::projective_space_gram(2)),
        (fixtures::hirzebruch(2), vec![vec![rat(2, 1), rat(1, 1)], vec![rat(1, 1), rat(3, 1)]]),
        (fixtures::weighted_projective_plane(), identity_q(2)),
    ];
    for (k, (fan, gram)) in cases.into_iter().enumerate() {
        let psi = Complements::inner_product(Arc::new(fan), gram.clone()).unwrap();
        let report = verify_presentation(&gram, &psi, 100, k as u64).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.polynomials_checked, 100);
    }
}

#[test]
fn presentation_detects_a_mismatched_gram() {
    let fan = Arc::new(fixtures::projective_space(2));
    let psi = Complements::standard(fan);
    let wrong = fixtures::projective_space_gram(2);
    let report = verify_presentation(&wrong, &psi, 20, 7).unwrap();
    assert!(!report.passed());
    assert!(!report.nonzero_generators.is_empty());
}

#[test]
fn quadrics_vanish_on_projective_space() {
    for n in 2..=4 {
        let (psi, gram) = projective_space_presentation(n);
        for g in j_generators(psi.fan(), &gram).unwrap() {
            assert!(evaluate_on_fundamental(&g, &psi).unwrap().is_zero());
        }
    }
}

#[test]
fn todd_series_coefficients() {
    assert_eq!(
        todd_series(4),
        vec![rat(1, 1), rat(1, 2), rat(1, 12), rat(0, 1), rat(-1, 720)]
    );
}

#[test]
fn todd_cycle_of_the_projective_line() {
    let psi = standard(fixtures::projective_space(1));
    let fan = psi.fan().clone();
    let todd = todd_cycle(&psi).unwrap();
    let expected = Cycle::from_terms(
        fan.clone(),
        [(fan.zero_cone(), rat(1, 1)), (fan.ray_cone(0), rat(1, 2)), (fan.ray_cone(1), rat(1, 2))],
    );
    assert_eq!(todd.cycle, expected);
    assert_eq!(todd.top_degree, rat(1, 1));
    assert!(!todd.formula_extension);
}

#[test]
fn todd_cycle_of_projective_space_matches_cyclic_fractions() {
    for n in 1..=4 {
        let (psi, gram) = projective_space_presentation(n);
        let fan = psi.fan().clone();
        let todd = todd_cycle(&psi).unwrap();
        assert_eq!(todd.top_degree, Rational::one());
        for sigma in fan.cone_ids() {
            let subset: Vec<usize> = fan.cone_rays(sigma).iter().map(|i| i + 1).collect();
            let q = q_fraction(&subset, n + 1).unwrap();
            assert_eq!(todd.cycle.coefficient(sigma), q, "n = {n}, cone {subset:?}");
            if fan.dim(sigma) <= 2 {
                assert_eq!(linear_span_fraction(&fan, sigma, &gram).unwrap(), q);
            }
        }
    }
}

#[test]
fn todd_cycle_of_a_product_has_degree_one() {
    let psi = standard(fixtures::product_of_projective_lines(2));
    assert_eq!(todd_cycle(&psi).unwrap().top_degree, Rational::one());
    let singular = standard(fixtures::weighted_projective_plane());
    assert!(todd_cycle(&singular).unwrap().formula_extension);
}

#[test]
fn cyclic_fractions() {
    assert_eq!(q_fraction(&[1, 2, 4], 5).unwrap(), rat(1, 6));
    assert_eq!(q_fraction(&[3], 5).unwrap(), rat(1, 2));
    assert_eq!(q_fraction(&[5, 1], 5).unwrap(), rat(1, 3));
    assert_eq!(q_fraction(&[], 3).unwrap(), rat(1, 1));
    assert_eq!(q_fraction(&[1, 2, 3], 3).unwrap_err(), RingError::BadSubset(3));
}

#[test]
fn span_fractions() {
    let fan = fixtures::projective_space(2);
    let gram = fixtures::projective_space_gram(2);
    let sigma = cone(&fan, &[0, 1]);
    assert_eq!(linear_span_fraction(&fan, sigma, &gram).unwrap(), rat(1, 3));
    assert_eq!(linear_span_fraction(&fan, sigma, &identity_q(2)).unwrap(), rat(1, 4));
    assert_eq!(linear_span_fraction(&fan, fan.ray_cone(2), &gram).unwrap(), rat(1, 2));
    // (1,0) against (-1,-1) under the identity: 135 degrees.
    assert_eq!(linear_span_fraction(&fan, cone(&fan, &[0, 2]), &identity_q(2)).unwrap(), rat(3, 8));
    let skew = vec![vec![rat(3, 1), rat(1, 1)], vec![rat(1, 1), rat(1, 1)]];
    assert_eq!(linear_span_fraction(&fan, sigma, &skew).unwrap_err(), RingError::IrrationalAngle);
    let space = fixtures::projective_space(3);
    let top = space.maximal_cones()[0];
    assert_eq!(
        linear_span_fraction(&space, top, &identity_q(3)).unwrap_err(),
        RingError::UnsupportedDimension(3)
    );
}

#[test]
fn chern_cycles() {
    let psi = standard(fixtures::projective_space(2));
    let fan = psi.fan().clone();
    assert_eq!(chern_cycle(&psi, 0).unwrap(), Cycle::fundamental(fan.clone()));
    let ones = QCartierDivisor::from_ray_coefficients(fan.clone(), &[rat(1, 1), rat(1, 1), rat(1, 1)]).unwrap();
    assert_eq!(chern_cycle(&psi, 1).unwrap(), divisor_cycle(&ones));
    assert_eq!(degree(&chern_cycle(&psi, 2).unwrap()).unwrap(), rat(3, 1));
    for (fan, euler) in [(fixtures::product_of_projective_lines(2), 4), (fixtures::hirzebruch(3), 4), (fixtures::projective_space(3), 4)] {
        let psi = standard(fan);
        let n = psi.fan().rank();
        assert_eq!(degree(&chern_cycle(&psi, n).unwrap()).unwrap(), rat(euler, 1));
    }
    let e2 = poly("y1*y2 + y1*y3 + y2*y3", 3);
    assert_eq!(characteristic_class(&e2, &psi).unwrap(), chern_cycle(&psi, 2).unwrap());
}

#[test]
fn lefschetz_examples() {
    for n in 1..=4 {
        let psi = standard(fixtures::affine_space(n));
        let a: Vec<Rational> = (1..=n as i64).map(|k| rat(if k % 2 == 0 { -k } else { k }, 1)).collect();
        for i in 0..=n / 2 {
            let report = lefschetz_injectivity(&psi, &a, i).unwrap();
            assert_eq!(report.rows, report.cols);
            assert!(report.injective, "n = {n}, i = {i}");
        }
    }
    let psi = standard(fixtures::projective_space(2));
    let ones = vec![rat(1, 1); 3];
    let report = lefschetz_injectivity(&psi, &ones, 0).unwrap();
    assert_eq!((report.rows, report.cols, report.rank), (3, 1, 1));
    assert!(report.injective);
    let report = lefschetz_injectivity(&psi, &ones, 1).unwrap();
    assert_eq!(report.exponent, 0);
    assert!(report.injective);
    assert_eq!(
        lefschetz_injectivity(&psi, &[rat(1, 1), rat(0, 1), rat(1, 1)], 0).unwrap_err(),
        RingError::ZeroCoefficient(1)
    );
    assert!(matches!(lefschetz_injectivity(&psi, &ones, 2), Err(RingError::IndexOutOfRange { .. })));
}

fn random_cycle(fan: &Arc<Fan>, coefficients: &[i64]) -> Cycle {
    Cycle::from_terms(
        fan.clone(),
        fan.cone_ids().zip(coefficients.iter().cycle()).map(|(c, &q)| (c, rat(q, 1))),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn ring_laws_hold(
        a in prop::collection::vec(-3i64..4, 11),
        b in prop::collection::vec(-3i64..4, 11),
        c in prop::collection::vec(-3i64..4, 11),
        g in prop::collection::vec(-2i64..3, 4),
    ) {
        // Gram B^T B + I for a random 2x2 matrix B.
        let m = [[g[0], g[1]], [g[2], g[3]]];
        let gram: QMatrix = (0..2)
            .map(|i| (0..2).map(|j| rat(m[0][i] * m[0][j] + m[1][i] * m[1][j] + i64::from(i == j), 1)).collect())
            .collect();
        let fan = Arc::new(fixtures::hirzebruch(1));
        let psi = Complements::inner_product(fan.clone(), gram).unwrap();
        let (x, y, z) = (random_cycle(&fan, &a), random_cycle(&fan, &b), random_cycle(&fan, &c));
        let xy = product(&x, &y, &psi).unwrap();
        prop_assert_eq!(&xy, &product(&y, &x, &psi).unwrap());
        prop_assert_eq!(
            product(&xy, &z, &psi).unwrap(),
            product(&x, &product(&y, &z, &psi).unwrap(), &psi).unwrap()
        );
        prop_assert_eq!(product(&Cycle::fundamental(fan.clone()), &x, &psi).unwrap(), x.clone());
        for j in 0..=2 {
            for k in 0..=2 - j {
                let p = product(&x.codimension_part(j), &y.codimension_part(k), &psi).unwrap();
                prop_assert_eq!(p.codimension_part(j + k), p);
            }
        }
    }
}
