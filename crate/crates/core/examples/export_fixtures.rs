//! Writes the fixture catalogue as documents: `export_fixtures <dir>`.

use std::path::Path;
use std::sync::Arc;

use toric_cycles::complements::Complements;
use toric_cycles::cycle::Cycle;
use toric_cycles::divisor::QCartierDivisor;
use toric_cycles::fixtures;
use toric_cycles::format;
use toric_cycles::linalg::{identity_q, int, rat, Rational};
use toric_cycles::morphism::star_subdivision;

fn write(dir: &Path, name: &str, doc: &serde_json::Value) {
    std::fs::write(dir.join(name), format::to_text(doc)).expect("output directory is writable");
}

fn coefficients(c: &[i64]) -> Vec<Rational> {
    c.iter().map(|&x| rat(x, 1)).collect()
}

fn main() {
    let dir = std::env::args().nth(1).expect("usage: export_fixtures <dir>");
    let dir = Path::new(&dir);
    std::fs::create_dir_all(dir.join("invalid")).expect("output directory is writable");

    for (name, fan) in fixtures::catalogue() {
        write(dir, &format!("{name}.fan.json"), &format::fan_to_json(&fan));
        let fan = Arc::new(fan);
        let standard = Complements::inner_product(fan.clone(), identity_q(fan.rank())).expect("identity");
        write(dir, &format!("{name}.standard.complements.json"), &format::complements_to_json(&standard));
    }

    for (n, name) in [(1, "projective-line"), (2, "projective-plane"), (3, "projective-3-space")] {
        let fan = Arc::new(fixtures::projective_space(n));
        let psi = Complements::inner_product(fan.clone(), fixtures::projective_space_gram(n)).expect("positive definite");
        write(dir, &format!("{name}.root.complements.json"), &format::complements_to_json(&psi));
        let mut c = vec![0; n + 1];
        c[n] = 1;
        let hyperplane = QCartierDivisor::from_ray_coefficients(fan.clone(), &coefficients(&c)).expect("simplicial");
        write(dir, &format!("{name}.hyperplane.divisor.json"), &format::divisor_to_json(&hyperplane));
    }

    let plane = Arc::new(fixtures::projective_space(2));
    let flag = Complements::flag(plane.clone(), vec![coefficients(&[2, 1]), coefficients(&[1, 3])]).expect("generic");
    write(dir, "projective-plane.flag.complements.json", &format::complements_to_json(&flag));
    let ample = QCartierDivisor::from_ray_coefficients(plane.clone(), &coefficients(&[1, 1, 1])).expect("simplicial");
    write(dir, "projective-plane.anticanonical.divisor.json", &format::divisor_to_json(&ample));
    let line = Cycle::orbit(plane.clone(), plane.cone_by_rays(&[2]).expect("ray cone"));
    write(dir, "projective-plane.line.cycle.json", &format::cycle_to_json(&line));
    let point = Cycle::orbit(plane.clone(), plane.cone_by_rays(&[0, 1]).expect("maximal cone"));
    write(dir, "projective-plane.point.cycle.json", &format::cycle_to_json(&point));
    let (_, blowup) = star_subdivision(&plane, &vec![int(1), int(1)]).expect("interior of a cone");
    write(dir, "projective-plane.blowup.morphism.json", &format::morphism_to_json(&blowup));

    let quadric = Arc::new(fixtures::product_of_projective_lines(2));
    let d = QCartierDivisor::from_ray_coefficients(quadric, &coefficients(&[1, 1, 0, 0])).expect("simplicial");
    write(dir, "p1xp1.bidegree-1-1.divisor.json", &format::divisor_to_json(&d));

    let cube = Arc::new(fixtures::cube_fan());
    let ones = QCartierDivisor::from_maximal(
        cube.clone(),
        cube.maximal_cones()
            .iter()
            .map(|&c| {
                // On the facet cone of x_a = s the equation is s·e_a.
                let rays = cube.ray_vectors(c);
                (0..3)
                    .map(|a| {
                        let s = &rays[0][a];
                        if rays.iter().all(|r| &r[a] == s) {
                            Rational::from_integer(s.clone())
                        } else {
                            rat(0, 1)
                        }
                    })
                    .collect()
            })
            .collect(),
    )
    .expect("equations agree on shared rays");
    write(dir, "cube-fan.boundary.divisor.json", &format::divisor_to_json(&ones));

    let broken = r#"{
  "equations": [
    {"cone": [0, 1], "m": ["0", "0"]},
    {"cone": [0, 2], "m": ["1", "0"]},
    {"cone": [1, 2], "m": ["0", "0"]}
  ],
  "kind": "divisor"
}
"#;
    std::fs::write(dir.join("invalid/projective-plane.disagreeing.divisor.json"), broken).expect("writable");
    let bad_rational = "{\n  \"kind\": \"cycle\",\n  \"terms\": [{\"cone\": [0], \"coeff\": \"1/0\"}]\n}\n";
    std::fs::write(dir.join("invalid/projective-plane.bad-rational.cycle.json"), bad_rational).expect("writable");
    let bad_index = "{\n  \"cones\": [[0, 1], [1, 7]],\n  \"kind\": \"fan\",\n  \"rank\": 2,\n  \"rays\": [[1, 0], [0, 1], [-1, -1]]\n}\n";
    std::fs::write(dir.join("invalid/bad-ray-index.fan.json"), bad_index).expect("writable");
}
