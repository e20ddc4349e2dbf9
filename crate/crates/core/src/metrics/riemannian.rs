use rayon::prelude::*;
use serde::Serialize;

use super::{BallRule, DistanceField, GeodesicSolver, MetricEstimate, MetricMethod, MollifierKernel};
use crate::geometry::BoundaryProjector;
use crate::{pt, Error, Point, Result};

/// Bracket of `d_{m,beta}(x, y)` together with the pieces it was built from.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RiemannianTypeEstimate {
    pub estimate: MetricEstimate,
    pub geodesic: MetricEstimate,
    pub euclidean: f64,
    /// `f(y) - f(x)` for the smoothed distance test function.
    pub witness_increment: f64,
    /// `d_g (1 - K/(beta r)) - 2K/beta`.
    pub penult_bound: f64,
    /// `1 - sqrt(K/(beta r))`.
    pub sandwich_factor: f64,
}

/// Evaluates the smoothed distance functions
/// `f(y) = (1 - K/(beta r)) int d_x(y + z) k_{K/beta}(z) dz`
/// with `d_x(z) = d_g(x, nu_2 z)`.
pub struct RiemannianTypeEstimator<'a> {
    solver: &'a GeodesicSolver,
    kernel: &'a MollifierKernel,
    projector: BoundaryProjector,
    rule: BallRule,
    reach: f64,
}

impl<'a> RiemannianTypeEstimator<'a> {
    pub fn new(solver: &'a GeodesicSolver, kernel: &'a MollifierKernel, reach: f64, rule_points: usize) -> Result<Self> {
        if !(reach > 0.0) {
            return Err(Error::InvalidParameter(format!("reach must be positive, got {reach}")));
        }
        if kernel.dimension() != solver.domain().dimension() {
            return Err(Error::InvalidParameter("kernel and domain dimensions differ".into()));
        }
        let projector = BoundaryProjector::new(solver.domain(), reach, 4096)?;
        Ok(Self { solver, kernel, projector, rule: kernel.ball_rule(rule_points.max(33)), reach })
    }

    pub fn solver(&self) -> &GeodesicSolver {
        self.solver
    }

    /// `4K/r`, the smallest admissible `beta`.
    pub fn threshold(&self) -> f64 {
        4.0 * self.kernel.k_const / self.reach
    }

    fn check_beta(&self, beta: f64) -> Result<()> {
        let threshold = self.threshold();
        if !(beta > 0.0) || beta < threshold * (1.0 - 1e-12) {
            return Err(Error::BetaBelowThreshold { beta, threshold });
        }
        Ok(())
    }

    /// `f_{m,beta,x}(y)` where `x` is the source of `field`.
    pub fn test_function(&self, field: &DistanceField, beta: f64, y: Point) -> Result<f64> {
        let k = self.kernel.k_const;
        if k == 0.0 {
            return self.solver.field_value(field, y).ok_or(Error::Disconnected(field.source(), y));
        }
        if !(beta > k / self.reach) {
            return Err(Error::BetaBelowThreshold { beta, threshold: k / self.reach });
        }
        let rho = k / beta;
        // parallel evaluation, serial summation: the result must not depend on scheduling
        let terms = self
            .rule
            .nodes
            .par_iter()
            .zip(self.rule.weights.par_iter())
            .map(|(z, &w)| {
                let p = self.projector.project(y + rho * pt(z[0], z[1]))?;
                let d = self.solver.field_value(field, p).ok_or(Error::Disconnected(field.source(), p))?;
                Ok(w * d)
            })
            .collect::<Result<Vec<f64>>>()?;
        let sum: f64 = terms.iter().sum();
        Ok((1.0 - k / (beta * self.reach)) * sum)
    }

    pub fn estimate(&self, beta: f64, x: Point, y: Point) -> Result<RiemannianTypeEstimate> {
        self.check_beta(beta)?;
        let field = self.solver.distance_field(x)?;
        self.estimate_with_field(&field, beta, y)
    }

    /// [`Self::estimate`] reusing a distance field from `x`.
    pub fn estimate_with_field(&self, field: &DistanceField, beta: f64, y: Point) -> Result<RiemannianTypeEstimate> {
        self.check_beta(beta)?;
        let x = field.source();
        let geodesic = self.solver.distance_from_field(field, y)?;
        let dg = geodesic.upper;
        let euclidean = (y - x).norm();
        let k = self.kernel.k_const;
        if k == 0.0 {
            // first order: the class is the 1-Lipschitz functions
            return Ok(RiemannianTypeEstimate {
                estimate: MetricEstimate { lower: dg.max(euclidean), upper: dg, method: geodesic.method },
                geodesic,
                euclidean,
                witness_increment: dg,
                penult_bound: dg,
                sandwich_factor: 1.0,
            });
        }
        let witness_increment = self.test_function(field, beta, y)? - self.test_function(field, beta, x)?;
        let penult_bound = dg * (1.0 - k / (beta * self.reach)) - 2.0 * k / beta;
        // linear functions of slope one belong to every class, hence the chord
        let (lower, method) = [
            (witness_increment, MetricMethod::MollifiedTestFunction),
            (euclidean, MetricMethod::Euclidean),
            (penult_bound, MetricMethod::PenultFormula),
        ]
        .into_iter()
        .fold((f64::NEG_INFINITY, MetricMethod::Euclidean), |best, c| if c.0 > best.0 { c } else { best });
        Ok(RiemannianTypeEstimate {
            estimate: MetricEstimate { lower, upper: dg, method },
            geodesic,
            euclidean,
            witness_increment,
            penult_bound,
            sandwich_factor: 1.0 - (k / (beta * self.reach)).sqrt(),
        })
    }
}
