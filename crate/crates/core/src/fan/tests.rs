use super::*;
use crate::fixtures;
use crate::linalg::{int, lattice_index, rat, to_qvec, IntVec};

fn iv(v: &[i64]) -> IntVec {
    v.iter().map(|&x| int(x)).collect()
}

#[test]
fn projective_plane_poset() {
    let fan = fixtures::projective_space(2);
    assert_eq!(fan.num_cones(), 7);
    assert_eq!(fan.maximal_cones().len(), 3);
    assert!(fan.is_complete() && fan.is_smooth() && fan.is_simplicial());
    assert_eq!(fan.cone_rays(fan.zero_cone()), &[] as &[usize]);
    let dims: Vec<usize> = fan.cone_ids().map(|c| fan.dim(c)).collect();
    assert_eq!(dims, vec![0, 1, 1, 1, 2, 2, 2]);
}

#[test]
fn affine_plane_is_not_complete() {
    let fan = fixtures::affine_space(2);
    assert_eq!(fan.num_cones(), 4);
    assert!(!fan.is_complete());
    assert!(fan.is_smooth());
}

#[test]
fn rejects_bad_rays() {
    assert_eq!(
        build_fan(2, vec![iv(&[2, 0]), iv(&[0, 1])], vec![vec![0, 1]]).unwrap_err(),
        FanError::NotPrimitive(0)
    );
    assert_eq!(
        build_fan(2, vec![iv(&[0, 0])], vec![vec![0]]).unwrap_err(),
        FanError::ZeroRay(0)
    );
    assert_eq!(
        build_fan(2, vec![iv(&[1, 0]), iv(&[1, 0])], vec![vec![0]]).unwrap_err(),
        FanError::DuplicateRay(0, 1)
    );
    assert_eq!(
        build_fan(2, vec![iv(&[1, 0]), iv(&[0, 1])], vec![vec![0]]).unwrap_err(),
        FanError::UnusedRay(1)
    );
    assert!(matches!(
        build_fan(2, vec![iv(&[1, 0])], vec![vec![3]]).unwrap_err(),
        FanError::RayIndexOutOfRange { .. }
    ));
}

#[test]
fn rejects_overlapping_cones() {
    let rays = vec![iv(&[1, 0]), iv(&[0, 1]), iv(&[1, 1]), iv(&[-1, 1])];
    let err = build_fan(2, rays, vec![vec![0, 1], vec![2, 3]]).unwrap_err();
    assert!(matches!(err, FanError::IntersectionNotFace(..)));
}

#[test]
fn rejects_cones_meeting_off_a_face() {
    // Both cones contain the diagonal of the square cone's base but only one has it as a face.
    let rays = vec![
        iv(&[1, 0, 1]),
        iv(&[0, 1, 1]),
        iv(&[-1, 0, 1]),
        iv(&[0, -1, 1]),
        iv(&[0, 1, -1]),
    ];
    let err = build_fan(3, rays, vec![vec![0, 1, 2, 3], vec![0, 2, 4]]).unwrap_err();
    assert!(matches!(err, FanError::IntersectionNotFace(..)));
}

#[test]
fn rejects_non_convex_cones() {
    let rays = vec![iv(&[1, 0]), iv(&[-1, 0])];
    assert_eq!(
        build_fan(2, rays, vec![vec![0, 1]]).unwrap_err(),
        FanError::NotStronglyConvex(vec![0, 1])
    );
    let rays = vec![iv(&[1, 0]), iv(&[1, 1]), iv(&[1, 2])];
    assert_eq!(
        build_fan(2, rays, vec![vec![0, 1, 2]]).unwrap_err(),
        FanError::RayNotExtremal { cone: vec![0, 1, 2], ray: 1 }
    );
}

#[test]
fn non_simplicial_fixtures() {
    let cube = fixtures::cube_fan();
    assert_eq!(cube.num_cones(), 1 + 8 + 12 + 6);
    assert!(cube.is_complete());
    assert!(!cube.is_simplicial());
    let sq = fixtures::square_cone();
    assert_eq!(sq.num_cones(), 10);
    assert!(!sq.is_complete());
    let top = sq.maximal_cones()[0];
    assert_eq!(sq.facets(top).len(), 4);
    assert_eq!(sq.multiplicity(top), int(2));
}

#[test]
fn multiplicities() {
    let fan = fixtures::singular_plane_cone();
    let top = fan.maximal_cones()[0];
    assert_eq!(fan.multiplicity(top), int(2));
    let w = fixtures::weighted_projective_plane();
    assert!(w.is_simplicial() && !w.is_smooth() && w.is_complete());
}

#[test]
fn star_of_a_ray_in_the_plane() {
    let fan = fixtures::projective_space(2);
    let rho3 = fan.ray_cone(2);
    let star = fan.star(rho3);
    assert_eq!(star.fan.rank(), 1);
    assert_eq!(star.fan.num_rays(), 2);
    assert!(star.fan.is_complete());
    assert_eq!(star.fan.num_cones(), fan.star_cones(rho3).len());
    assert_eq!(star.original(star.fan.zero_cone()), rho3);
}

#[test]
fn quotient_generator_lies_in_the_larger_cone_lattice() {
    let fan = fixtures::projective_space(2);
    let rho3 = fan.ray_cone(2);
    let sigma23 = fan.cone_by_rays(&[1, 2]).unwrap();
    let n = fan.primitive_quotient_generator(sigma23, rho3).unwrap().clone();
    let chart = &fan.geometry(rho3).chart;
    // Image is primitive and agrees in sign with the image of the ray (0, 1).
    let image = chart.project(&n);
    let ray_image = chart.project(&iv(&[0, 1]));
    assert_eq!(image, ray_image);
    assert!(fan.lattice_of(sigma23).coordinates(&to_qvec(&n)).is_some());
    assert!(fan.primitive_quotient_generator(rho3, sigma23).is_err());
}

#[test]
fn projective_space_gram_matches_root_lattice() {
    let g = fixtures::projective_space_gram(2);
    assert_eq!(g, vec![vec![rat(2, 3), rat(1, 3)], vec![rat(1, 3), rat(2, 3)]]);
    // The inverse is the Cartan matrix of type A_3.
    let g3 = fixtures::projective_space_gram(3);
    let inv = crate::linalg::inverse_q(&g3).unwrap();
    let cartan = [[2, -1, 0], [-1, 2, -1], [0, -1, 2]];
    for i in 0..3 {
        for j in 0..3 {
            assert_eq!(inv[i][j], rat(cartan[i][j], 1));
        }
    }
}

#[test]
fn every_codimension_two_interval_is_a_diamond() {
    for (name, fan) in fixtures::catalogue() {
        for sigma in fan.cone_ids() {
            for tau in fan.star_cones(sigma) {
                if fan.dim(tau) == fan.dim(sigma) + 2 {
                    assert_eq!(fan.diamond(sigma, tau).len(), 2, "{name}");
                }
            }
        }
    }
}

/// In each codimension-two interval `σ ≺ γ, β ≺ τ`, the image in `N(γ)` of the
/// generator for `β` over `σ` is `[N(σ)_τ : L]` times the generator for `τ`
/// over `γ`, where `L` is spanned by the generators of `γ` and `β` over `σ`.
#[test]
fn diamond_generators_satisfy_the_index_relation() {
    for (name, fan) in fixtures::catalogue() {
        for sigma in fan.cone_ids() {
            let chart_s = &fan.geometry(sigma).chart;
            let q = chart_s.quotient_rank();
            for tau in fan.star_cones(sigma) {
                if fan.dim(tau) != fan.dim(sigma) + 2 {
                    continue;
                }
                let middle = fan.diamond(sigma, tau);
                for (gamma, beta) in [(middle[0], middle[1]), (middle[1], middle[0])] {
                    let n_gamma = chart_s.project(fan.primitive_quotient_generator(gamma, sigma).unwrap());
                    let lift_beta = fan.primitive_quotient_generator(beta, sigma).unwrap().clone();
                    let n_beta = chart_s.project(&lift_beta);
                    let images: Vec<IntVec> = fan.ray_vectors(tau).iter().map(|r| chart_s.project(r)).collect();
                    let (local, _) = LatticeBasis::from_generators(q, &images).saturation();
                    let spanned = LatticeBasis::new(q, vec![n_gamma, n_beta]).unwrap();
                    let index = lattice_index(&spanned, &local).unwrap();
                    let chart_g = &fan.geometry(gamma).chart;
                    let lhs = chart_g.project(&lift_beta);
                    let rhs: IntVec = chart_g
                        .project(fan.primitive_quotient_generator(tau, gamma).unwrap())
                        .iter()
                        .map(|x| x * &index)
                        .collect();
                    assert_eq!(lhs, rhs, "{name}");
                }
            }
        }
    }
}

#[test]
fn stars_have_one_cone_per_containing_cone() {
    for (name, fan) in fixtures::catalogue() {
        for sigma in fan.cone_ids() {
            let star = fan.star(sigma);
            assert_eq!(star.fan.num_cones(), fan.star_cones(sigma).len(), "{name}");
            assert_eq!(star.fan.rank(), fan.rank() - fan.dim(sigma));
            if fan.is_complete() {
                assert!(star.fan.is_complete(), "{name}");
            }
        }
    }
}

#[test]
fn minimal_containing_cone() {
    let fan = fixtures::projective_space(2);
    let c = fan.minimal_cone_containing(&[rat(1, 1), rat(0, 1)]).unwrap();
    assert_eq!(fan.cone_rays(c), &[0]);
    let c = fan.minimal_cone_containing(&[rat(-1, 1), rat(1, 1)]).unwrap();
    assert_eq!(fan.cone_rays(c), &[1, 2]);
    let quadrant = fixtures::affine_space(2);
    assert!(quadrant.minimal_cone_containing(&[rat(-1, 1), rat(0, 1)]).is_none());
}
