//! Randomized identities across modules, driven by proptest seeds.

use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use toric_cycles::complements::Complements;
use toric_cycles::cycle::Cycle;
use toric_cycles::divisor::{degree, divisor_cycle, QCartierDivisor};
use toric_cycles::fan::Fan;
use toric_cycles::fixtures;
use toric_cycles::format;
use toric_cycles::intersection::{evaluate_polynomial_with, intersect};
use toric_cycles::linalg::rat;
use toric_cycles::morphism::{projection_formula_check, pushforward};
use toric_cycles::par::Exec;
use toric_cycles::poly::Polynomial;
use toric_cycles::sampling::{random_blowup, random_cycle, random_divisor, random_explicit, random_flag, random_gram};

fn catalogue() -> Vec<Arc<Fan>> {
    fixtures::catalogue().into_iter().map(|(_, f)| Arc::new(f)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn divisor_actions_commute(seed in any::<u64>(), which in 0usize..15, variant in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fan = &catalogue()[which];
        let psi = match variant {
            0 => Complements::inner_product(fan.clone(), random_gram(&mut rng, fan.rank())).unwrap(),
            1 => random_flag(&mut rng, fan),
            _ => random_explicit(&mut rng, fan),
        };
        let d = random_divisor(&mut rng, fan);
        let e = random_divisor(&mut rng, fan);
        let z = random_cycle(&mut rng, fan);
        let de = intersect(&d, &intersect(&e, &z, &psi).unwrap(), &psi).unwrap();
        let ed = intersect(&e, &intersect(&d, &z, &psi).unwrap(), &psi).unwrap();
        prop_assert_eq!(de, ed);
    }

    #[test]
    fn first_intersection_is_the_weil_divisor(seed in any::<u64>(), which in 0usize..15) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fan = &catalogue()[which];
        let psi = random_flag(&mut rng, fan);
        let d = random_divisor(&mut rng, fan);
        prop_assert_eq!(intersect(&d, &Cycle::fundamental(fan.clone()), &psi).unwrap(), divisor_cycle(&d));
    }

    #[test]
    fn principal_divisors_kill_complete_degrees(seed in any::<u64>(), m in prop::collection::vec(-4i64..5, 2)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fan = Arc::new(fixtures::hirzebruch(2));
        let psi = Complements::inner_product(fan.clone(), random_gram(&mut rng, 2)).unwrap();
        let principal = QCartierDivisor::principal(fan.clone(), m.iter().map(|&x| rat(x, 1)).collect());
        let d = random_divisor(&mut rng, &fan);
        let z = intersect(&principal, &intersect(&d, &Cycle::fundamental(fan.clone()), &psi).unwrap(), &psi).unwrap();
        prop_assert_eq!(degree(&z).unwrap(), rat(0, 1));
    }

    #[test]
    fn projection_formula_on_blowups(seed in any::<u64>(), which in 0usize..15) {
        let fan = &catalogue()[which];
        prop_assume!(fan.is_simplicial() && fan.rank() >= 2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (source, f) = random_blowup(&mut rng, fan);
        let gram = random_gram(&mut rng, fan.rank());
        let psi = Complements::inner_product(fan.clone(), gram.clone()).unwrap();
        let psi_source = Complements::inner_product(source.clone(), gram).unwrap();
        let d = random_divisor(&mut rng, fan);
        let z = random_cycle(&mut rng, &source);
        prop_assert!(projection_formula_check(&f, &d, &z, &psi, &psi_source).unwrap().holds());
        // Pushforward is additive.
        let w = random_cycle(&mut rng, &source);
        prop_assert_eq!(
            pushforward(&f, &z.sum(&w)).unwrap(),
            pushforward(&f, &z).unwrap().sum(&pushforward(&f, &w).unwrap())
        );
    }

    #[test]
    fn documents_round_trip_random_objects(seed in any::<u64>(), which in 0usize..15) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fan = &catalogue()[which];
        let d = random_divisor(&mut rng, fan);
        let z = random_cycle(&mut rng, fan);
        let psi = random_explicit(&mut rng, fan);
        let text = format::to_text(&format::divisor_to_json(&d));
        prop_assert_eq!(&format::parse_divisor(&text, fan).unwrap(), &d);
        let text = format::to_text(&format::cycle_to_json(&z));
        prop_assert_eq!(&format::parse_cycle(&text, fan).unwrap(), &z);
        let text = format::to_text(&format::complements_to_json(&psi));
        let back = format::parse_complements(&text, fan).unwrap();
        prop_assert_eq!(format::to_text(&format::complements_to_json(&back)), text);
    }
}

#[test]
fn sequential_and_parallel_evaluation_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for fan in [fixtures::projective_space(3), fixtures::product_of_projective_lines(3), fixtures::cube_fan()] {
        let fan = Arc::new(fan);
        let psi = Complements::inner_product(fan.clone(), random_gram(&mut rng, 3)).unwrap();
        let divisors: Vec<QCartierDivisor> = (0..3).map(|_| random_divisor(&mut rng, &fan)).collect();
        let p = Polynomial::parse("d1^3 - 2*d1*d2*d3 + 1/3*d2^2*d3 + d3^2 - d1", "d", 3).unwrap();
        let z = Cycle::fundamental(fan.clone());
        let seq = evaluate_polynomial_with(Exec::Sequential, &p, &divisors, &z, &psi).unwrap();
        let par = evaluate_polynomial_with(Exec::Parallel, &p, &divisors, &z, &psi).unwrap();
        assert_eq!(seq, par);
    }
}
