use crate::Point;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate boundary segment {segment}: zero-length derivative at s = {s}")]
    DegenerateSegment { segment: usize, s: f64 },

    #[error("no positive reach: {0}")]
    NoPositiveReach(String),

    #[error("outside tubular neighborhood: distance {distance} from the domain is not below reach {reach}")]
    OutsideTube { distance: f64, reach: f64 },

    #[error("point ({}, {}) is outside the closed domain", .0.x, .0.y)]
    OutsideDomain(Point),

    #[error("disconnected: no path between ({}, {}) and ({}, {})", .0.x, .0.y, .1.x, .1.y)]
    Disconnected(Point, Point),

    #[error("quadrature did not converge: successive refinements differ by {relative_change:e} (relative)")]
    QuadratureNonConvergence { relative_change: f64 },

    #[error("empty grid: no lattice node lies inside the domain")]
    EmptyGrid,

    #[error("matrix dimension {dimension} exceeds the dense eigensolver budget of {budget}; use a coarser grid")]
    EigenBudget { dimension: usize, budget: usize },

    #[error("time must be positive, got {0}")]
    NonPositiveTime(f64),

    #[error("twist overflow guard: alpha * range(phi) = {0} exceeds 200")]
    TwistOverflow(f64),

    #[error("beta = {beta} is below 4K/r = {threshold}")]
    BetaBelowThreshold { beta: f64, threshold: f64 },

    #[error("amplitude below quadrature floor: |K| = {value:e} < 1e-13 K(t,0,0)")]
    BelowQuadratureFloor { value: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
