use std::f64::consts::PI;

use heatbound_core::geometry::{analytic_reach, BoundaryProjector};
use heatbound_core::metrics::{
    grid_tolerance, projected_distance_bound, GeodesicSolver, MetricMethod, RiemannianTypeEstimator,
};
use heatbound_core::sampling::{random_interior_point, sample_pairs, PairMode};
use heatbound_core::{pt, Domain, GridDiscretization, MollifierKernel, Point, Shape};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn horseshoe(opening: f64) -> Domain {
    Domain::new(Shape::Horseshoe { r_in: 1.0, r_out: 2.0, opening_angle: opening }).unwrap()
}

/// Points on the centerline just past the two cap centers, and the exact
/// geodesic between them: tangent segments to the inner circle plus the arc.
fn tip_pair(opening: f64, offset: f64) -> (Point, Point, f64) {
    let end = 0.5 * opening + (0.5f64 / 1.5).asin() + offset;
    let x = pt(1.5 * end.cos(), 1.5 * end.sin());
    let y = pt(1.5 * end.cos(), -1.5 * end.sin());
    let sweep = 2.0 * PI - 2.0 * end;
    let tangent_angle = (1.0f64 / 1.5).acos();
    let exact = 2.0 * (1.5f64 * 1.5 - 1.0).sqrt() + (sweep - 2.0 * tangent_angle);
    (x, y, exact)
}

#[test]
fn horseshoe_tip_geodesic_converges() {
    let d = horseshoe(PI / 6.0);
    let (x, y, exact) = tip_pair(PI / 6.0, 0.2);
    let mut errors = Vec::new();
    for cells in [60, 120] {
        let g = GridDiscretization::with_cells(&d, cells).unwrap();
        let s = GeodesicSolver::new(&g);
        let e = s.distance(x, y).unwrap();
        assert_eq!(e.method, MetricMethod::GeodesicGrid);
        assert!(e.upper >= exact - 1e-9 && e.upper <= exact + s.tolerance(exact), "{} vs {exact}", e.upper);
        assert!(e.lower <= e.upper);
        errors.push(e.upper - exact);
    }
    println!("tip geodesic errors {errors:?}, refinement ratio {:.2}", errors[0] / errors[1]);
    assert!(errors[1] < errors[0]);
}

#[test]
fn l_shape_uses_exact_visibility_path() {
    let d = Domain::new(Shape::LShape { arm: 1.5, thickness: 0.5 }).unwrap();
    let g = GridDiscretization::with_cells(&d, 40).unwrap();
    let s = GeodesicSolver::new(&g);
    let (x, y) = (pt(-1.0, 0.1), pt(0.1, -1.0));
    let e = s.distance(x, y).unwrap();
    assert_eq!(e.method, MetricMethod::GeodesicVisibility);
    // the path bends once, at the reflex corner
    assert!((e.upper - (x.norm() + y.norm())).abs() < 1e-12);
    assert!((e.lower - (y - x).norm()).abs() < 1e-12);
}

#[test]
fn disconnected_and_outside_points_are_errors() {
    let d = horseshoe(PI / 6.0);
    let g = GridDiscretization::with_cells(&d, 40).unwrap();
    let s = GeodesicSolver::new(&g);
    assert!(s.distance(pt(0.0, 0.0), pt(1.5, 0.0)).is_err());
}

#[test]
fn geodesic_is_symmetric_and_satisfies_triangle_inequality() {
    let d = horseshoe(0.3);
    let g = GridDiscretization::with_cells(&d, 80).unwrap();
    let s = GeodesicSolver::new(&g);
    let h = g.spacing();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let x = random_interior_point(&d, &mut rng, 0.0).unwrap();
        let y = random_interior_point(&d, &mut rng, 0.0).unwrap();
        let z = random_interior_point(&d, &mut rng, 0.0).unwrap();
        let dxy = s.distance(x, y).unwrap().upper;
        let dyx = s.distance(y, x).unwrap().upper;
        assert!((dxy - dyx).abs() <= grid_tolerance(dxy, h), "{dxy} vs {dyx}");
        let dxz = s.distance(x, z).unwrap().upper;
        let dyz = s.distance(y, z).unwrap().upper;
        assert!(dxz <= dxy + dyz + 2.0 * grid_tolerance(dxz, h));
    }
}

#[test]
fn convex_domains_collapse_all_metrics() {
    let d = Domain::new(Shape::Disc { radius: 1.0 }).unwrap();
    let g = GridDiscretization::with_cells(&d, 40).unwrap();
    let s = GeodesicSolver::new(&g);
    let k = MollifierKernel::new(2, 2, 16).unwrap();
    let est = RiemannianTypeEstimator::new(&s, &k, 1.0, 33).unwrap();
    for p in sample_pairs(&s, 10, 3, 4.0 * g.spacing(), PairMode::Uniform).unwrap() {
        let e = est.estimate(4.0 * k.k_const, p.x, p.y).unwrap();
        let d0 = (p.y - p.x).norm();
        assert_eq!(e.geodesic.upper, d0);
        assert_eq!(e.estimate.lower, d0);
        assert_eq!(e.estimate.upper, d0);
    }
}

#[test]
fn one_dimensional_constant_is_twice_the_peak() {
    let k = MollifierKernel::new(2, 1, 16).unwrap();
    // independent normalization by the trapezoid rule on a fine grid
    let n = 200_000;
    let mass: f64 = (1..n).map(|i| {
        let z = -1.0 + 2.0 * i as f64 / n as f64;
        (-1.0 / (1.0 - z * z)).exp()
    }).sum::<f64>() * 2.0 / n as f64;
    // int |k'| = 2 k(0) = 2 c exp(-1) with c = 1/mass
    let expected = 2.0 * (-1.0f64).exp() / mass;
    assert!((k.k_const - expected).abs() < 1e-8 * expected, "{} vs {expected}", k.k_const);
    assert_eq!(MollifierKernel::new(1, 1, 16).unwrap().k_const, 0.0);
}

#[test]
fn higher_order_constants_are_finite() {
    for m in [3, 4] {
        let k = MollifierKernel::new(m, 2, 16).unwrap();
        assert!(k.k_const.is_finite() && k.k_const > 0.0);
        let expected_entries: usize = (1..m).map(|j| j + 1).sum();
        assert_eq!(k.derivative_integrals.len(), expected_entries);
    }
}

struct Setup {
    domain: Domain,
    grid: GridDiscretization,
    reach: f64,
    kernel: MollifierKernel,
}

fn setup(cells: usize) -> Setup {
    let domain = horseshoe(0.3);
    let reach = analytic_reach(domain.shape()).unwrap();
    let grid = GridDiscretization::with_cells(&domain, cells).unwrap();
    Setup { domain, grid, reach, kernel: MollifierKernel::new(2, 2, 16).unwrap() }
}

#[test]
fn test_function_brackets() {
    let s = setup(100);
    let solver = GeodesicSolver::new(&s.grid);
    let est = RiemannianTypeEstimator::new(&solver, &s.kernel, s.reach, 33).unwrap();
    let k = s.kernel.k_const;
    let h = s.grid.spacing();
    for p in sample_pairs(&solver, 10, 17, 4.0 * h, PairMode::Uniform).unwrap() {
        let field = solver.distance_field(p.x).unwrap();
        for factor in [4.0, 20.0] {
            let beta = factor * k / s.reach;
            let fx = est.test_function(&field, beta, p.x).unwrap();
            let fy = est.test_function(&field, beta, p.y).unwrap();
            let dg = p.geodesic;
            assert!(fx <= k / beta + 2.0 * h, "f(x) = {fx} > K/beta = {}", k / beta);
            assert!(fy - fx <= dg + grid_tolerance(dg, h));
            assert!(fy >= dg * (1.0 - k / (beta * s.reach)) - k / beta - grid_tolerance(dg, h));
        }
    }
}

#[test]
fn tip_estimates_clear_the_sandwich_factor() {
    let s = setup(120);
    let solver = GeodesicSolver::new(&s.grid);
    let est = RiemannianTypeEstimator::new(&solver, &s.kernel, s.reach, 33).unwrap();
    let (x, y, _) = tip_pair(0.3, 0.15);
    let k = s.kernel.k_const;
    for (factor, required) in [(4.0, 0.5), (100.0, 0.9)] {
        let e = est.estimate(factor * k / s.reach, x, y).unwrap();
        assert!((e.sandwich_factor - required).abs() < 1e-12);
        assert!(e.estimate.lower >= required * e.geodesic.upper, "beta {factor}K/r: {:?}", e);
    }
}

#[test]
fn estimate_is_monotone_in_beta() {
    let s = setup(100);
    let solver = GeodesicSolver::new(&s.grid);
    let est = RiemannianTypeEstimator::new(&solver, &s.kernel, s.reach, 33).unwrap();
    let k = s.kernel.k_const;
    for p in sample_pairs(&solver, 8, 23, 4.0 * s.grid.spacing(), PairMode::Uniform).unwrap() {
        let field = solver.distance_field(p.x).unwrap();
        let lowers: Vec<f64> = [4.0, 10.0, 100.0, 1000.0]
            .iter()
            .map(|f| est.estimate_with_field(&field, f * k / s.reach, p.y).unwrap().estimate.lower)
            .collect();
        for w in lowers.windows(2) {
            assert!(w[1] >= w[0] - 1e-4 * p.geodesic, "{lowers:?}");
        }
    }
}

#[test]
fn projected_points_stay_geodesically_close() {
    let s = setup(120);
    let solver = GeodesicSolver::new(&s.grid);
    let proj = BoundaryProjector::new(&s.domain, s.reach, 2048).unwrap();
    let h = s.grid.spacing();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    while checked < 40 {
        let x = random_interior_point(&s.domain, &mut rng, 0.0).unwrap();
        let delta = s.reach * rng.random_range(0.2..0.9);
        let r = delta * rng.random::<f64>().sqrt();
        let th = rng.random_range(0.0..2.0 * PI);
        let z = x + r * pt(th.cos(), th.sin());
        let Ok(p) = proj.project(z) else { continue };
        let dg = solver.distance(x, p).unwrap().upper;
        let bound = projected_distance_bound(delta, s.reach);
        assert!(dg <= bound + grid_tolerance(dg, h), "{dg} > {bound}");
        checked += 1;
    }
}

#[test]
fn test_functions_are_lipschitz_with_bounded_hessian() {
    let s = setup(120);
    let solver = GeodesicSolver::new(&s.grid);
    let est = RiemannianTypeEstimator::new(&solver, &s.kernel, s.reach, 33).unwrap();
    let k = s.kernel.k_const;
    let beta = 4.0 * k / s.reach;
    let rho = k / beta;
    let step = 0.25 * rho;
    let x = pt(0.0, 1.5);
    let field = solver.distance_field(x).unwrap();
    let f = |p: Point| est.test_function(&field, beta, p).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for _ in 0..12 {
        let y = random_interior_point(&s.domain, &mut rng, 2.0 * step).unwrap();
        let ex = pt(step, 0.0);
        let ey = pt(0.0, step);
        let f0 = f(y);
        let (fxp, fxm, fyp, fym) = (f(y + ex), f(y - ex), f(y + ey), f(y - ey));
        let grad = pt(fxp - fxm, fyp - fym) / (2.0 * step);
        assert!(grad.norm() <= 1.0 + 1e-3, "gradient {}", grad.norm());
        let fxx = (fxp - 2.0 * f0 + fxm) / (step * step);
        let fyy = (fyp - 2.0 * f0 + fym) / (step * step);
        assert!(fxx.abs() <= 1.05 * beta && fyy.abs() <= 1.05 * beta, "second derivatives {fxx} {fyy} vs beta {beta}");
    }
}
