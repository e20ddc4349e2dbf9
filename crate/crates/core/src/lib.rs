//! Numerical machinery for heat kernel bounds of higher-order elliptic
//! operators on non-convex planar domains.
//!
//! The crate is split along the pipeline it supports:
//!
//! * [`geometry`]: catalog domains with C² (or C^{1,1}) boundaries, inward
//!   normals, rolling-ball reach and nearest-point projection.
//! * [`grid`]: masked lattice discretization shared by the geodesic solver
//!   and the finite-difference operators.
//! * [`metrics`]: Euclidean and geodesic distances, the mollifier constant,
//!   smoothed distance test functions and the Riemannian-type metric bracket.
//! * [`operators`]: Dirichlet polyharmonic operators, their spectral heat
//!   kernels, twisted semigroups and symbol convexity.
//! * [`bounds`]: Gaussian bound expressions, the sharp decay constant, the
//!   free-space kernel and bound fitting.

// `!(x > 0.0)` is how NaN gets rejected along with non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod geometry;
pub mod grid;
pub mod metrics;
pub mod operators;
pub mod quadrature;
pub mod sampling;

pub use error::{Error, Result};
pub use geometry::{BoundarySample, Domain, NeighborhoodClass, Reach, Shape};
pub use grid::GridDiscretization;
pub use metrics::{MetricEstimate, MetricMethod, MollifierKernel};
pub use operators::{PolyharmonicOperator, SpectralHeatKernel, SymbolSpec};
pub use bounds::{BoundParameters, BoundReport};

/// Points live in the plane; one-dimensional domains use the x axis.
pub type Point = nalgebra::Vector2<f64>;

/// Shorthand constructor for a [`Point`].
#[inline]
pub fn pt(x: f64, y: f64) -> Point {
    Point::new(x, y)
}
