//! Distances on the domain: Euclidean, geodesic, and two-sided estimates of
//! the Riemannian-type metrics built from smoothed distance functions.

mod geodesic;
mod mollifier;
mod riemannian;
mod visibility;

use serde::Serialize;

pub use geodesic::{DistanceField, GeodesicSolver};
pub use mollifier::{BallRule, MollifierKernel, MultiIndex};
pub use riemannian::{RiemannianTypeEstimate, RiemannianTypeEstimator};
pub use visibility::visibility_shortest_path;

use crate::Point;

/// How the two sides of a [`MetricEstimate`] were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricMethod {
    Euclidean,
    GeodesicGrid,
    GeodesicVisibility,
    MollifiedTestFunction,
    PenultFormula,
}

/// A bracket `lower <= d <= upper` (up to the stated grid tolerance).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricEstimate {
    pub lower: f64,
    pub upper: f64,
    pub method: MetricMethod,
}

impl MetricEstimate {
    pub fn exact(value: f64, method: MetricMethod) -> Self {
        Self { lower: value, upper: value, method }
    }
}

pub fn euclidean_distance(x: Point, y: Point) -> f64 {
    (y - x).norm()
}

/// `mu^{-1/(2m)} d`, a lower bound for the Finsler-type metric of an
/// operator whose symbol lies between `|xi|^{2m}` and `mu |xi|^{2m}`.
pub fn finsler_scaling_bound(mu: f64, m: usize, d_m_beta: f64) -> f64 {
    assert!(mu >= 1.0, "ellipticity ratio must be >= 1");
    mu.powf(-1.0 / (2.0 * m as f64)) * d_m_beta
}

/// Lower bound on the chord `|y - x|` for points with `d_g(x, y) < 2r`.
pub fn chord_lower_bound(reach: f64, geodesic: f64) -> f64 {
    2.0 * reach * geodesic / (2.0 * reach + geodesic)
}

/// Bound on `d_g(x, nu_2 z)` for `z` in `B(x; delta)`, `delta < r`.
pub fn projected_distance_bound(delta: f64, reach: f64) -> f64 {
    1.0 / (1.0 / delta - 1.0 / reach)
}

/// Combined tolerance carried by grid geodesic distances: 3% of the value
/// (worst-case stencil metrication) plus two grid spacings.
pub fn grid_tolerance(geodesic: f64, h: f64) -> f64 {
    0.03 * geodesic + 2.0 * h
}
