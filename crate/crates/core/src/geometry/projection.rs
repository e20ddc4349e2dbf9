use super::{boundary, BoundarySample, Domain, Shape};
use crate::{pt, Error, Point, Result};

/// Nearest-point map onto the closed domain, valid inside the tubular
/// neighborhood of radius `reach.r`.
///
/// A coarse search over boundary samples picks the candidate segment, then
/// Newton steps on the segment parameter (and on its loop neighbours) refine
/// the foot point.
#[derive(Debug, Clone)]
pub struct BoundaryProjector {
    domain: Domain,
    reach: f64,
    samples: Vec<BoundarySample>,
    /// For each segment, the previous and next segment of its loop.
    neighbours: Vec<(usize, usize)>,
}

impl BoundaryProjector {
    pub fn new(domain: &Domain, reach_r: f64, samples: usize) -> Result<Self> {
        let samples = domain.boundary_sample(samples.max(16))?;
        let mut neighbours = Vec::with_capacity(domain.segments().len());
        let mut base = 0;
        for lp in domain.loops() {
            let n = lp.len();
            for i in 0..n {
                neighbours.push((base + (i + n - 1) % n, base + (i + 1) % n));
            }
            base += n;
        }
        Ok(Self { domain: domain.clone(), reach: reach_r, samples, neighbours })
    }

    pub fn reach(&self) -> f64 {
        self.reach
    }

    /// `nu_2`: identity on the closed domain, nearest boundary point on the
    /// tube `0 < d(z, Omega) < r`.
    pub fn project(&self, z: Point) -> Result<Point> {
        let sd = self.domain.signed_distance(z);
        if sd <= 0.0 {
            return Ok(z);
        }
        if sd >= self.reach {
            return Err(Error::OutsideTube { distance: sd, reach: self.reach });
        }
        Ok(self.nearest_boundary_point(z))
    }

    /// Foot point on the boundary, no tube check.
    pub fn nearest_boundary_point(&self, z: Point) -> Point {
        if let Shape::Interval { a, b } = self.domain.shape() {
            return if (z.x - a).abs() <= (z.x - b).abs() { pt(a, 0.0) } else { pt(b, 0.0) };
        }
        let (seg, s) = self.foot_parameter(z);
        self.domain.segments()[seg].eval(s)
    }

    /// Foot point of a planar domain with its inward normal and curvature.
    pub fn nearest_boundary_sample(&self, z: Point) -> Result<BoundarySample> {
        if self.domain.dimension() == 1 {
            return Err(Error::InvalidParameter("interval boundaries have no segments".into()));
        }
        let (seg, s) = self.foot_parameter(z);
        self.sample_at(seg, s)
    }

    fn foot_parameter(&self, z: Point) -> (usize, f64) {
        let best = self
            .samples
            .iter()
            .min_by(|p, q| (p.point - z).norm_squared().total_cmp(&(q.point - z).norm_squared()))
            .expect("boundary samples");
        let segs = self.domain.segments();
        let (prev, next) = self.neighbours[best.segment];
        let candidates = [(best.segment, best.param), (prev, 1.0), (next, 0.0)];
        candidates
            .iter()
            .map(|&(seg, s0)| (seg, segs[seg].closest_parameter(z, s0)))
            .min_by(|a, b| {
                (segs[a.0].eval(a.1) - z).norm_squared().total_cmp(&(segs[b.0].eval(b.1) - z).norm_squared())
            })
            .expect("candidate points")
    }

    /// Boundary sample at a given segment parameter, for reporting normals at
    /// projected points.
    pub fn sample_at(&self, segment: usize, s: f64) -> Result<BoundarySample> {
        boundary::sample_at(self.domain.segments(), segment, s)
    }
}

/// One-shot `nu_2` projection; builds a [`BoundaryProjector`] with 2048
/// boundary samples. Prefer the projector for repeated queries.
pub fn project_nu2(domain: &Domain, reach_r: f64, z: Point) -> Result<Point> {
    BoundaryProjector::new(domain, reach_r, 2048)?.project(z)
}
