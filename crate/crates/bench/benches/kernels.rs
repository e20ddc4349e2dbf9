use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use heatbound_core::bounds::{fit_decay_constant, free_kernel_fourier};
use heatbound_core::metrics::{GeodesicSolver, RiemannianTypeEstimator};
use heatbound_core::operators::{assemble_polyharmonic, spectral_decompose};
use heatbound_core::{pt, Domain, GridDiscretization, MollifierKernel, Shape};

fn horseshoe() -> Domain {
    Domain::new(Shape::Horseshoe { r_in: 1.0, r_out: 2.0, opening_angle: 0.3 }).unwrap()
}

fn geodesic(c: &mut Criterion) {
    let grid = GridDiscretization::with_cells(&horseshoe(), 120).unwrap();
    let solver = GeodesicSolver::new(&grid);
    c.bench_function("distance_field horseshoe 120", |b| {
        b.iter(|| solver.distance_field(black_box(pt(0.5, 1.4))).unwrap())
    });
    c.bench_function("geodesic solver setup 120", |b| b.iter(|| GeodesicSolver::new(black_box(&grid))));
}

fn mollifier(c: &mut Criterion) {
    c.bench_function("mollifier constant m=2 N=2", |b| b.iter(|| MollifierKernel::new(black_box(2), 2, 16).unwrap()));
    let grid = GridDiscretization::with_cells(&horseshoe(), 80).unwrap();
    let solver = GeodesicSolver::new(&grid);
    let kernel = MollifierKernel::new(2, 2, 16).unwrap();
    let estimator = RiemannianTypeEstimator::new(&solver, &kernel, 0.2057, 33).unwrap();
    let field = solver.distance_field(pt(1.2, 0.9)).unwrap();
    let beta = 10.0 * kernel.k_const / 0.2057;
    c.bench_function("riemannian estimate", |b| {
        b.iter(|| estimator.estimate_with_field(&field, beta, black_box(pt(1.2, -0.9))).unwrap())
    });
}

fn spectral(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectral");
    group.sample_size(10);
    let grid = GridDiscretization::with_cells(&horseshoe(), 40).unwrap();
    let op = assemble_polyharmonic(&grid, 2).unwrap();
    group.bench_function("assemble bilaplacian 40", |b| b.iter(|| assemble_polyharmonic(black_box(&grid), 2).unwrap()));
    group.bench_function("decompose bilaplacian 40", |b| b.iter(|| spectral_decompose(black_box(&op)).unwrap()));
    group.finish();
}

fn free_kernel(c: &mut Criterion) {
    c.bench_function("free kernel m=2 d=5", |b| b.iter(|| free_kernel_fourier(2, 1, 1.0, black_box(5.0)).unwrap()));
    let mut group = c.benchmark_group("fit");
    group.sample_size(10);
    group.bench_function("decay fit m=2", |b| b.iter(|| fit_decay_constant(2, 1.0, (10.0, 40.0), 400).unwrap()));
    group.finish();
}

criterion_group!(benches, geodesic, mollifier, spectral, free_kernel);
criterion_main!(benches);
