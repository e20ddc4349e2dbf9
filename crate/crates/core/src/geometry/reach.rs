use serde::Serialize;

use super::{BoundarySample, Domain, Shape};
use crate::{Error, Point, Result};

/// Tangent jump (radians) above which a segment junction counts as a corner.
const CORNER_ANGLE: f64 = 1e-6;

/// Rolling-ball radius certified on a boundary sample.
#[derive(Debug, Clone, Serialize)]
pub struct Reach {
    pub r: f64,
    pub certified_samples: usize,
    pub failure_witness: Option<ReachWitness>,
}

/// A sample `p`, signed offset `u` along the inward normal and an offending
/// boundary sample `q` strictly inside `B(p + u n(p); |u|)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ReachWitness {
    #[serde(serialize_with = "ser_point")]
    pub p: Point,
    pub u: f64,
    #[serde(serialize_with = "ser_point")]
    pub q: Point,
}

fn ser_point<S: serde::Serializer>(p: &Point, s: S) -> std::result::Result<S::Ok, S::Error> {
    [p.x, p.y].serialize(s)
}

impl Reach {
    /// Reach of a domain already known analytically (intervals, tests).
    pub fn known(r: f64) -> Self {
        Self { r, certified_samples: 0, failure_witness: None }
    }
}

/// Largest `r` (to within `tol`) such that for every boundary sample `p`
/// both balls `B(p +- r n(p); r)` hold no other boundary sample closer than
/// `r - tol` to their center.
pub fn estimate_reach(domain: &Domain, samples: usize, tol: f64) -> Result<Reach> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("reach tolerance must be positive, got {tol}")));
    }
    if let Shape::Interval { a, b } = domain.shape() {
        let pts = domain.boundary_sample(2)?;
        return bisect(&pts, 2.0 * (b - a), tol).map(|mut r| {
            r.certified_samples = 2;
            r
        });
    }
    if samples < 64 {
        return Err(Error::InvalidParameter(format!("reach needs at least 64 samples, got {samples}")));
    }
    for lp in domain.loops() {
        for i in 0..lp.len() {
            let t_end = lp[i].tangent(1.0);
            let t_start = lp[(i + 1) % lp.len()].tangent(0.0);
            if let (Some(a), Some(b)) = (t_end, t_start) {
                let angle = a.dot(&b).clamp(-1.0, 1.0).acos();
                if angle > CORNER_ANGLE {
                    let c = lp[i].eval(1.0);
                    return Err(Error::NoPositiveReach(format!(
                        "corner at ({:.6}, {:.6}) with tangent jump {angle:.4} rad (curvature unbounded)",
                        c.x, c.y
                    )));
                }
            }
        }
    }
    let pts = domain.boundary_sample(samples)?;
    let total: f64 = domain.segments().iter().map(|s| s.length()).sum();
    let spacing = total / samples as f64;
    let reach = bisect(&pts, domain.diameter(), tol)?;
    if reach.r < 2.0 * spacing {
        return Err(Error::NoPositiveReach(format!(
            "rolling-ball radius {:.3e} does not exceed the sample spacing {:.3e}",
            reach.r, spacing
        )));
    }
    Ok(reach)
}

fn violation(pts: &[BoundarySample], r: f64, tol: f64) -> Option<ReachWitness> {
    for (i, p) in pts.iter().enumerate() {
        for sign in [1.0, -1.0] {
            let c = p.point + p.normal * (sign * r);
            let limit = r - tol;
            if limit <= 0.0 {
                continue;
            }
            let limit2 = limit * limit;
            if let Some(q) = pts
                .iter()
                .enumerate()
                .find(|(j, q)| *j != i && (q.point - c).norm_squared() < limit2)
            {
                return Some(ReachWitness { p: p.point, u: sign * r, q: q.1.point });
            }
        }
    }
    None
}

fn bisect(pts: &[BoundarySample], upper: f64, tol: f64) -> Result<Reach> {
    if violation(pts, upper, tol).is_none() {
        return Ok(Reach { r: upper, certified_samples: pts.len(), failure_witness: None });
    }
    let (mut lo, mut hi) = (0.0, upper);
    while hi - lo > 0.25 * tol {
        let mid = 0.5 * (lo + hi);
        if violation(pts, mid, tol).is_none() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let witness = violation(pts, lo + tol, tol).or_else(|| violation(pts, hi, tol));
    Ok(Reach { r: lo, certified_samples: pts.len(), failure_witness: witness })
}

/// Closed-form reach of the catalog shapes with C^{1,1} boundary, used as an
/// independent reference in tests and reports.
pub fn analytic_reach(shape: Shape) -> Option<f64> {
    match shape {
        Shape::Interval { a, b } => Some(0.5 * (b - a)),
        Shape::Disc { radius } => Some(radius),
        Shape::Annulus { r_in, r_out } => Some((0.5 * (r_out - r_in)).min(r_in)),
        Shape::Horseshoe { r_in, r_out, opening_angle } => {
            let rc = 0.5 * (r_in + r_out);
            let w = 0.5 * (r_out - r_in);
            let end = 0.5 * opening_angle + (w / rc).asin();
            let gap = 2.0 * rc * end.sin() - 2.0 * w;
            Some(w.min(0.5 * gap).min(r_in))
        }
        Shape::Square { .. } | Shape::LShape { .. } => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn disc_reach_is_radius() {
        let d = Domain::new(Shape::Disc { radius: 1.5 }).unwrap();
        let r = estimate_reach(&d, 512, 1e-3).unwrap();
        assert_abs_diff_eq!(r.r, 1.5, epsilon = 1e-3);
        assert!(r.failure_witness.is_some());
    }

    #[test]
    fn square_has_no_positive_reach() {
        let d = Domain::new(Shape::Square { side: 2.0 }).unwrap();
        assert!(matches!(estimate_reach(&d, 256, 1e-3), Err(Error::NoPositiveReach(_))));
    }

    #[test]
    fn interval_reach_is_half_length() {
        let d = Domain::new(Shape::Interval { a: 0.0, b: 2.0 }).unwrap();
        let r = estimate_reach(&d, 64, 1e-4).unwrap();
        assert_abs_diff_eq!(r.r, 1.0, epsilon = 1e-4);
    }

    #[test]
    fn too_few_samples_rejected() {
        let d = Domain::new(Shape::Disc { radius: 1.0 }).unwrap();
        assert!(estimate_reach(&d, 32, 1e-3).is_err());
    }
}
