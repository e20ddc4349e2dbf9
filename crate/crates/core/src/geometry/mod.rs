//! Catalog domains, their boundaries, reach and nearest-point projection.
//!
//! Every domain carries an exact signed distance (negative inside) and a
//! boundary made of oriented line and arc segments with the domain on the
//! left. One-dimensional intervals live on the x axis.

mod boundary;
mod projection;
mod reach;

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

pub use boundary::{BoundarySample, Segment};
pub use projection::{project_nu2, BoundaryProjector};
pub use reach::{analytic_reach, estimate_reach, Reach, ReachWitness};

use crate::{pt, Error, Point, Result};

/// Catalog shapes, deserializable from `{"shape": ..., "params": {...}}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", content = "params", rename_all = "snake_case", deny_unknown_fields)]
pub enum Shape {
    Interval { a: f64, b: f64 },
    /// Axis-aligned square centered at the origin.
    Square { side: f64 },
    Disc { radius: f64 },
    Annulus { r_in: f64, r_out: f64 },
    /// Union of `[-arm, thickness] x [0, thickness]` and
    /// `[0, thickness] x [-arm, thickness]`; the reflex corner is the origin.
    LShape { arm: f64, thickness: f64 },
    /// Tube of half-width `(r_out - r_in) / 2` around a circular arc of
    /// radius `(r_in + r_out) / 2`, with the wedge of angle `opening_angle`
    /// around the positive x axis left free. The ends are semicircular caps
    /// tangent to the wedge rays.
    Horseshoe { r_in: f64, r_out: f64, opening_angle: f64 },
}

impl Shape {
    pub fn name(&self) -> &'static str {
        match self {
            Shape::Interval { .. } => "interval",
            Shape::Square { .. } => "square",
            Shape::Disc { .. } => "disc",
            Shape::Annulus { .. } => "annulus",
            Shape::LShape { .. } => "l_shape",
            Shape::Horseshoe { .. } => "horseshoe",
        }
    }

    /// Catalog entries with representative parameters, in a fixed order.
    pub fn catalog() -> Vec<Shape> {
        vec![
            Shape::Interval { a: 0.0, b: PI },
            Shape::Square { side: 2.0 },
            Shape::Disc { radius: 1.0 },
            Shape::Annulus { r_in: 1.0, r_out: 2.0 },
            Shape::LShape { arm: 1.5, thickness: 0.5 },
            Shape::Horseshoe { r_in: 1.0, r_out: 2.0, opening_angle: PI / 6.0 },
        ]
    }

    pub fn parameter_names(&self) -> &'static [&'static str] {
        match self {
            Shape::Interval { .. } => &["a", "b"],
            Shape::Square { .. } => &["side"],
            Shape::Disc { .. } => &["radius"],
            Shape::Annulus { .. } => &["r_in", "r_out"],
            Shape::LShape { .. } => &["arm", "thickness"],
            Shape::Horseshoe { .. } => &["r_in", "r_out", "opening_angle"],
        }
    }
}

/// Where a point sits relative to `Omega_delta` and `(dOmega)_delta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NeighborhoodClass {
    /// Within `delta` of the boundary (this also implies membership of `Omega_delta`).
    InBoundaryDelta,
    /// Inside `Omega` and at least `delta` from the boundary.
    InOmegaDelta,
    Neither,
}

/// Arc geometry of a horseshoe, derived once from its parameters.
#[derive(Debug, Clone, Copy)]
struct HorseshoeArc {
    center_radius: f64,
    half_width: f64,
    /// Angle of the first cap center; the centerline spans `[end_angle, 2pi - end_angle]`.
    end_angle: f64,
}

impl HorseshoeArc {
    fn new(r_in: f64, r_out: f64, opening_angle: f64) -> Self {
        let center_radius = 0.5 * (r_in + r_out);
        let half_width = 0.5 * (r_out - r_in);
        let end_angle = 0.5 * opening_angle + (half_width / center_radius).asin();
        Self { center_radius, half_width, end_angle }
    }

    fn cap_centers(&self) -> (Point, Point) {
        let rc = self.center_radius;
        let a = self.end_angle;
        (pt(rc * a.cos(), rc * a.sin()), pt(rc * a.cos(), -rc * a.sin()))
    }

    fn distance_to_centerline(&self, p: Point) -> f64 {
        let r = p.norm();
        if r == 0.0 {
            return self.center_radius;
        }
        let angle = p.y.atan2(p.x).rem_euclid(TAU);
        if angle >= self.end_angle && angle <= TAU - self.end_angle {
            (r - self.center_radius).abs()
        } else {
            let (c1, c2) = self.cap_centers();
            (p - c1).norm().min((p - c2).norm())
        }
    }
}

/// A catalog region with its oriented boundary.
#[derive(Debug, Clone)]
pub struct Domain {
    shape: Shape,
    /// Closed boundary loops; segments within a loop join end to start.
    loops: Vec<Vec<Segment>>,
    segments: Vec<Segment>,
    polygon: Option<Vec<Point>>,
    horseshoe: Option<HorseshoeArc>,
}

impl Domain {
    pub fn new(shape: Shape) -> Result<Self> {
        let bad = |msg: &str| Err(Error::InvalidParameter(format!("{}: {msg}", shape.name())));
        let mut polygon = None;
        let mut horseshoe = None;
        let loops: Vec<Vec<Segment>> = match shape {
            Shape::Interval { a, b } => {
                if !(a.is_finite() && b.is_finite() && a < b) {
                    return bad("need a < b");
                }
                Vec::new()
            }
            Shape::Square { side } => {
                if !(side > 0.0 && side.is_finite()) {
                    return bad("side must be positive");
                }
                let s = 0.5 * side;
                let verts = vec![pt(-s, -s), pt(s, -s), pt(s, s), pt(-s, s)];
                let l = polygon_loop(&verts);
                polygon = Some(verts);
                vec![l]
            }
            Shape::Disc { radius } => {
                if !(radius > 0.0 && radius.is_finite()) {
                    return bad("radius must be positive");
                }
                vec![vec![boundary::full_circle(Point::zeros(), radius, true)]]
            }
            Shape::Annulus { r_in, r_out } => {
                if !(r_in > 0.0 && r_in < r_out && r_out.is_finite()) {
                    return bad("need 0 < r_in < r_out");
                }
                vec![
                    vec![boundary::full_circle(Point::zeros(), r_out, true)],
                    vec![boundary::full_circle(Point::zeros(), r_in, false)],
                ]
            }
            Shape::LShape { arm, thickness } => {
                if !(thickness > 0.0 && arm > 0.0 && arm.is_finite() && thickness.is_finite()) {
                    return bad("arm and thickness must be positive");
                }
                let (a, t) = (arm, thickness);
                let verts = vec![pt(0.0, -a), pt(t, -a), pt(t, t), pt(-a, t), pt(-a, 0.0), pt(0.0, 0.0)];
                let l = polygon_loop(&verts);
                polygon = Some(verts);
                vec![l]
            }
            Shape::Horseshoe { r_in, r_out, opening_angle } => {
                if !(r_in > 0.0 && r_in < r_out && r_out.is_finite()) {
                    return bad("need 0 < r_in < r_out");
                }
                if !(opening_angle >= 0.0) {
                    return bad("opening_angle must be non-negative");
                }
                let arc = HorseshoeArc::new(r_in, r_out, opening_angle);
                if arc.end_angle >= PI - 1e-9 {
                    return bad("opening_angle leaves no room for the body");
                }
                horseshoe = Some(arc);
                vec![horseshoe_loop(r_in, r_out, &arc)]
            }
        };
        let segments = loops.iter().flatten().copied().collect();
        Ok(Self { shape, loops, segments, polygon, horseshoe })
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn dimension(&self) -> usize {
        match self.shape {
            Shape::Interval { .. } => 1,
            _ => 2,
        }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub(crate) fn loops(&self) -> &[Vec<Segment>] {
        &self.loops
    }

    /// Vertices of polygonal domains (counter-clockwise), `None` otherwise.
    pub fn polygon(&self) -> Option<&[Point]> {
        self.polygon.as_deref()
    }

    pub fn is_convex(&self) -> bool {
        matches!(self.shape, Shape::Interval { .. } | Shape::Square { .. } | Shape::Disc { .. })
    }

    /// Axis-aligned bounding box `(min, max)`.
    pub fn bounding_box(&self) -> (Point, Point) {
        match self.shape {
            Shape::Interval { a, b } => (pt(a, 0.0), pt(b, 0.0)),
            Shape::Square { side } => (pt(-side / 2.0, -side / 2.0), pt(side / 2.0, side / 2.0)),
            Shape::Disc { radius } => (pt(-radius, -radius), pt(radius, radius)),
            Shape::Annulus { r_out, .. } | Shape::Horseshoe { r_out, .. } => {
                (pt(-r_out, -r_out), pt(r_out, r_out))
            }
            Shape::LShape { arm, thickness } => (pt(-arm, -arm), pt(thickness, thickness)),
        }
    }

    /// Diameter of the bounding box along its longest side, used as the
    /// length scale for default tolerances.
    pub fn diameter(&self) -> f64 {
        let (lo, hi) = self.bounding_box();
        (hi.x - lo.x).max(hi.y - lo.y)
    }

    /// Exact signed distance to the boundary, negative inside.
    pub fn signed_distance(&self, p: Point) -> f64 {
        match self.shape {
            Shape::Interval { a, b } => (a - p.x).max(p.x - b),
            Shape::Disc { radius } => p.norm() - radius,
            Shape::Annulus { r_in, r_out } => {
                let r = p.norm();
                (r - r_out).max(r_in - r)
            }
            Shape::Horseshoe { .. } => {
                let arc = self.horseshoe.expect("horseshoe geometry");
                arc.distance_to_centerline(p) - arc.half_width
            }
            Shape::Square { .. } | Shape::LShape { .. } => {
                let verts = self.polygon.as_ref().expect("polygon vertices");
                polygon_signed_distance(verts, p)
            }
        }
    }

    /// Distance from `p` to the boundary.
    pub fn distance_to_boundary(&self, p: Point) -> f64 {
        self.signed_distance(p).abs()
    }

    fn edge_epsilon(&self) -> f64 {
        1e-12 * self.diameter()
    }

    /// Open-set membership; points on the boundary are outside.
    pub fn inside(&self, p: Point) -> bool {
        self.signed_distance(p) < -self.edge_epsilon()
    }

    /// Membership of the closure, with slack `tol`.
    pub fn in_closure(&self, p: Point, tol: f64) -> bool {
        self.signed_distance(p) <= tol.max(self.edge_epsilon())
    }

    /// Whether the straight segment `a -> b` stays in the closed domain,
    /// checked at spacing at most `step`.
    pub fn segment_in_closure(&self, a: Point, b: Point, step: f64) -> bool {
        if let Some(verts) = &self.polygon {
            return polygon_contains_segment(verts, a, b, self.edge_epsilon());
        }
        let len = (b - a).norm();
        let n = ((len / step).ceil() as usize).max(1);
        let tol = self.edge_epsilon() * 1e3;
        (0..=n).all(|i| self.in_closure(a + (b - a) * (i as f64 / n as f64), tol))
    }

    /// Classifies `z` against `Omega_delta` and `(dOmega)_delta`.
    pub fn delta_neighborhood_test(&self, z: Point, delta: f64) -> Result<NeighborhoodClass> {
        if !(delta > 0.0) {
            return Err(Error::InvalidParameter(format!("delta must be positive, got {delta}")));
        }
        let sd = self.signed_distance(z);
        Ok(if sd.abs() < delta {
            NeighborhoodClass::InBoundaryDelta
        } else if sd < 0.0 {
            NeighborhoodClass::InOmegaDelta
        } else {
            NeighborhoodClass::Neither
        })
    }

    /// `count` boundary points equidistributed in arc length with inward
    /// normals. Intervals always return their two endpoints.
    pub fn boundary_sample(&self, count: usize) -> Result<Vec<BoundarySample>> {
        if let Shape::Interval { a, b } = self.shape {
            return Ok(vec![
                BoundarySample { point: pt(a, 0.0), normal: pt(1.0, 0.0), segment: 0, param: 0.0, curvature: 0.0 },
                BoundarySample { point: pt(b, 0.0), normal: pt(-1.0, 0.0), segment: 1, param: 0.0, curvature: 0.0 },
            ]);
        }
        if count < 16 {
            return Err(Error::InvalidParameter(format!("boundary sample count must be >= 16, got {count}")));
        }
        boundary::sample_segments(&self.segments, count)
    }

    /// Nearest boundary point by direct parametric minimization over every
    /// segment. Used as a reference by tests; the fast path is
    /// [`BoundaryProjector`].
    pub fn nearest_boundary_point(&self, z: Point) -> Point {
        if let Shape::Interval { a, b } = self.shape {
            return if (z.x - a).abs() <= (z.x - b).abs() { pt(a, 0.0) } else { pt(b, 0.0) };
        }
        self.segments
            .iter()
            .flat_map(|seg| {
                (0..=16).map(move |k| {
                    let s = seg.closest_parameter(z, k as f64 / 16.0);
                    seg.eval(s)
                })
            })
            .min_by(|p, q| (p - z).norm().total_cmp(&(q - z).norm()))
            .expect("domain has boundary segments")
    }
}

fn polygon_loop(verts: &[Point]) -> Vec<Segment> {
    (0..verts.len())
        .map(|i| Segment::Line { start: verts[i], end: verts[(i + 1) % verts.len()] })
        .collect()
}

fn horseshoe_loop(r_in: f64, r_out: f64, arc: &HorseshoeArc) -> Vec<Segment> {
    let a = arc.end_angle;
    let body = TAU - 2.0 * a;
    let (c1, c2) = arc.cap_centers();
    vec![
        Segment::Arc { center: Point::zeros(), radius: r_out, start_angle: a, sweep: body },
        Segment::Arc { center: c2, radius: arc.half_width, start_angle: TAU - a, sweep: PI },
        Segment::Arc { center: Point::zeros(), radius: r_in, start_angle: TAU - a, sweep: -body },
        Segment::Arc { center: c1, radius: arc.half_width, start_angle: a + PI, sweep: PI },
    ]
}

fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let d = b - a;
    let s = ((p - a).dot(&d) / d.norm_squared()).clamp(0.0, 1.0);
    (a + d * s - p).norm()
}

fn polygon_contains_point(verts: &[Point], p: Point) -> bool {
    let mut inside = false;
    let n = verts.len();
    for i in 0..n {
        let a = verts[i];
        let b = verts[(i + 1) % n];
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    inside
}

fn polygon_signed_distance(verts: &[Point], p: Point) -> f64 {
    let n = verts.len();
    let d = (0..n)
        .map(|i| point_segment_distance(p, verts[i], verts[(i + 1) % n]))
        .fold(f64::INFINITY, f64::min);
    if polygon_contains_point(verts, p) {
        -d
    } else {
        d
    }
}

fn cross(a: Point, b: Point) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Exact closed-polygon containment of a segment: no proper crossing of an
/// edge, and every sub-piece between touched vertices has its midpoint in
/// the closure.
fn polygon_contains_segment(verts: &[Point], a: Point, b: Point, eps: f64) -> bool {
    let n = verts.len();
    let d = b - a;
    let mut cuts = vec![0.0, 1.0];
    for i in 0..n {
        let p = verts[i];
        let q = verts[(i + 1) % n];
        let e = q - p;
        let denom = cross(d, e);
        let o1 = cross(e, a - p);
        let o2 = cross(e, b - p);
        let o3 = cross(d, p - a);
        let o4 = cross(d, q - a);
        let scale = eps * (1.0 + d.norm() * e.norm());
        if denom.abs() > scale
            && ((o1 > scale && o2 < -scale) || (o1 < -scale && o2 > scale))
            && ((o3 > scale && o4 < -scale) || (o3 < -scale && o4 > scale))
        {
            return false;
        }
        if d.norm_squared() > 0.0 {
            let t = (p - a).dot(&d) / d.norm_squared();
            if t > 0.0 && t < 1.0 && (a + d * t - p).norm() <= eps.max(1e-12) {
                cuts.push(t);
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    let contains = |x: Point| polygon_signed_distance(verts, x) <= eps.max(1e-12);
    contains(a)
        && contains(b)
        && cuts.windows(2).all(|w| contains(a + d * (0.5 * (w[0] + w[1]))))
}
