use std::f64::consts::PI;

use heatbound_core::geometry::{estimate_reach, project_nu2, BoundaryProjector};
use heatbound_core::{pt, Domain, NeighborhoodClass, Shape};
use proptest::prelude::*;

fn smooth_shapes() -> Vec<Shape> {
    vec![
        Shape::Disc { radius: 1.0 },
        Shape::Annulus { r_in: 1.0, r_out: 2.0 },
        Shape::Horseshoe { r_in: 1.0, r_out: 2.0, opening_angle: PI / 6.0 },
        Shape::Horseshoe { r_in: 1.0, r_out: 2.0, opening_angle: 0.3 },
    ]
}

#[test]
fn normals_point_inward_everywhere() {
    for shape in smooth_shapes() {
        let d = Domain::new(shape).unwrap();
        let r = estimate_reach(&d, 1024, 1e-3 * d.diameter()).unwrap().r;
        let eps = r / 100.0;
        for s in d.boundary_sample(512).unwrap() {
            assert!((s.normal.norm() - 1.0).abs() < 1e-12);
            assert!(d.inside(s.point + eps * s.normal), "{} at {:?}", shape.name(), s.point);
            assert!(!d.inside(s.point - eps * s.normal), "{} at {:?}", shape.name(), s.point);
        }
    }
}

#[test]
fn rolling_balls_are_empty() {
    for shape in smooth_shapes() {
        let d = Domain::new(shape).unwrap();
        let tol = 1e-3 * d.diameter();
        let reach = estimate_reach(&d, 1024, tol).unwrap();
        let samples = d.boundary_sample(1024).unwrap();
        for (i, p) in samples.iter().enumerate() {
            for sign in [1.0, -1.0] {
                let c = p.point + sign * reach.r * p.normal;
                let nearest = samples
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, q)| (q.point - c).norm())
                    .fold(f64::INFINITY, f64::min);
                assert!(nearest >= reach.r - 2.0 * tol, "{}: {nearest} < {}", shape.name(), reach.r);
            }
        }
    }
}

#[test]
fn horseshoe_reach_matches_closed_form() {
    for opening in [0.1, 0.3, PI / 6.0, 1.0] {
        let shape = Shape::Horseshoe { r_in: 1.0, r_out: 2.0, opening_angle: opening };
        let d = Domain::new(shape).unwrap();
        let tol = 1e-3 * d.diameter();
        let r = estimate_reach(&d, 4096, tol).unwrap().r;
        let exact = heatbound_core::geometry::analytic_reach(shape).unwrap();
        assert!((r - exact).abs() < 2.0 * tol + 0.01 * exact, "opening {opening}: {r} vs {exact}");
    }
}

#[test]
fn projection_examples() {
    let disc = Domain::new(Shape::Disc { radius: 1.0 }).unwrap();
    assert_eq!(project_nu2(&disc, 1.0, pt(0.5, 0.0)).unwrap(), pt(0.5, 0.0));
    assert!((project_nu2(&disc, 1.0, pt(1.5, 0.0)).unwrap() - pt(1.0, 0.0)).norm() < 1e-12);
    assert!(project_nu2(&disc, 1.0, pt(2.5, 0.0)).is_err());
    let annulus = Domain::new(Shape::Annulus { r_in: 1.0, r_out: 2.0 }).unwrap();
    assert!((project_nu2(&annulus, 0.5, pt(0.8, 0.0)).unwrap() - pt(1.0, 0.0)).norm() < 1e-10);
}

#[test]
fn delta_examples() {
    let disc = Domain::new(Shape::Disc { radius: 1.0 }).unwrap();
    assert_eq!(disc.delta_neighborhood_test(pt(1.05, 0.0), 0.1).unwrap(), NeighborhoodClass::InBoundaryDelta);
    assert_eq!(disc.delta_neighborhood_test(pt(0.0, 0.0), 0.1).unwrap(), NeighborhoodClass::InOmegaDelta);
    assert_eq!(disc.delta_neighborhood_test(pt(1.2, 0.0), 0.1).unwrap(), NeighborhoodClass::Neither);
}

fn horseshoe_projector() -> (Domain, BoundaryProjector, f64) {
    let d = Domain::new(Shape::Horseshoe { r_in: 1.0, r_out: 2.0, opening_angle: PI / 6.0 }).unwrap();
    let r = heatbound_core::geometry::analytic_reach(d.shape()).unwrap();
    let p = BoundaryProjector::new(&d, r, 2048).unwrap();
    (d, p, r)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn projection_is_idempotent(x in -2.3f64..2.3, y in -2.3f64..2.3) {
        let (d, proj, r) = horseshoe_projector();
        let z = pt(x, y);
        prop_assume!(d.signed_distance(z) < 0.95 * r);
        let once = proj.project(z).unwrap();
        let twice = proj.project(once).unwrap();
        prop_assert!((once - twice).norm() < 1e-9);
        prop_assert!(d.in_closure(once, 1e-9));
    }

    #[test]
    fn tube_points_decompose_along_normals(x in -2.3f64..2.3, y in -2.3f64..2.3) {
        let (d, proj, r) = horseshoe_projector();
        let z = pt(x, y);
        let dist = d.distance_to_boundary(z);
        prop_assume!(dist > 1e-6 && dist < 0.95 * r);
        let foot = proj.nearest_boundary_sample(z).unwrap();
        // z = p + u n(p) with |u| = d(z, boundary)
        let u = (z - foot.point).dot(&foot.normal);
        prop_assert!((u.abs() - dist).abs() < 1e-8);
        prop_assert!((foot.point + u * foot.normal - z).norm() < 1e-8);
    }
}
