use std::f64::consts::TAU;

use serde::Serialize;

use crate::{Error, Point, Result};

/// A parametric boundary piece `s in [0, 1] -> R^2`.
///
/// Every segment is oriented so that the domain lies to its left; the
/// inward normal is therefore the tangent rotated by +90 degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Segment {
    Line { start: Point, end: Point },
    /// Circular arc from `start_angle` sweeping `sweep` radians (negative
    /// sweep runs clockwise).
    Arc {
        center: Point,
        radius: f64,
        start_angle: f64,
        sweep: f64,
    },
}

impl Segment {
    pub fn eval(&self, s: f64) -> Point {
        match *self {
            Segment::Line { start, end } => start + (end - start) * s,
            Segment::Arc { center, radius, start_angle, sweep } => {
                let a = start_angle + sweep * s;
                center + Point::new(a.cos(), a.sin()) * radius
            }
        }
    }

    /// First derivative with respect to the unit parameter.
    pub fn d1(&self, s: f64) -> Point {
        match *self {
            Segment::Line { start, end } => end - start,
            Segment::Arc { radius, start_angle, sweep, .. } => {
                let a = start_angle + sweep * s;
                Point::new(-a.sin(), a.cos()) * (radius * sweep)
            }
        }
    }

    /// Second derivative with respect to the unit parameter.
    pub fn d2(&self, s: f64) -> Point {
        match *self {
            Segment::Line { .. } => Point::zeros(),
            Segment::Arc { radius, start_angle, sweep, .. } => {
                let a = start_angle + sweep * s;
                Point::new(-a.cos(), -a.sin()) * (radius * sweep * sweep)
            }
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            Segment::Line { start, end } => (end - start).norm(),
            Segment::Arc { radius, sweep, .. } => radius * sweep.abs(),
        }
    }

    /// Signed curvature (positive when the curve turns left, i.e. towards
    /// the domain).
    pub fn curvature(&self, s: f64) -> f64 {
        let d1 = self.d1(s);
        let d2 = self.d2(s);
        let speed = d1.norm();
        (d1.x * d2.y - d1.y * d2.x) / (speed * speed * speed)
    }

    /// Unit tangent at `s`.
    pub fn tangent(&self, s: f64) -> Option<Point> {
        let d = self.d1(s);
        let n = d.norm();
        (n > 1e-14).then(|| d / n)
    }

    /// Closest parameter to `z` on this segment, by Newton iteration on
    /// `g(s) = d1(s) . (eval(s) - z)` started from `s0` and clamped to [0, 1].
    pub fn closest_parameter(&self, z: Point, s0: f64) -> f64 {
        if let Segment::Line { start, end } = *self {
            let d = end - start;
            return ((z - start).dot(&d) / d.norm_squared()).clamp(0.0, 1.0);
        }
        let mut s = s0.clamp(0.0, 1.0);
        for _ in 0..50 {
            let diff = self.eval(s) - z;
            let d1 = self.d1(s);
            let g = d1.dot(&diff);
            let dg = self.d2(s).dot(&diff) + d1.norm_squared();
            if dg <= 0.0 {
                break;
            }
            let next = (s - g / dg).clamp(0.0, 1.0);
            if (next - s).abs() < 1e-15 {
                s = next;
                break;
            }
            s = next;
        }
        s
    }
}

pub(crate) fn full_circle(center: Point, radius: f64, counter_clockwise: bool) -> Segment {
    Segment::Arc {
        center,
        radius,
        start_angle: 0.0,
        sweep: if counter_clockwise { TAU } else { -TAU },
    }
}

/// A point of the boundary together with its inward unit normal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundarySample {
    #[serde(serialize_with = "serialize_point")]
    pub point: Point,
    #[serde(serialize_with = "serialize_point")]
    pub normal: Point,
    /// Index into [`crate::Domain::segments`].
    pub segment: usize,
    pub param: f64,
    /// Signed curvature, units 1/length.
    pub curvature: f64,
}

fn serialize_point<S: serde::Serializer>(p: &Point, s: S) -> std::result::Result<S::Ok, S::Error> {
    [p.x, p.y].serialize(s)
}

/// Samples `count` points equidistributed in arc length over all segments.
pub(crate) fn sample_segments(segments: &[Segment], count: usize) -> Result<Vec<BoundarySample>> {
    let lengths: Vec<f64> = segments.iter().map(Segment::length).collect();
    let total: f64 = lengths.iter().sum();
    if total <= 0.0 {
        return Err(Error::DegenerateSegment { segment: 0, s: 0.0 });
    }
    let mut out = Vec::with_capacity(count);
    let mut seg = 0;
    let mut offset = 0.0;
    for i in 0..count {
        let arc = total * i as f64 / count as f64;
        while seg + 1 < segments.len() && arc >= offset + lengths[seg] {
            offset += lengths[seg];
            seg += 1;
        }
        let s = if lengths[seg] > 0.0 { ((arc - offset) / lengths[seg]).clamp(0.0, 1.0) } else { 0.0 };
        out.push(sample_at(segments, seg, s)?);
    }
    Ok(out)
}

pub(crate) fn sample_at(segments: &[Segment], seg: usize, s: f64) -> Result<BoundarySample> {
    let segment = &segments[seg];
    let tangent = segment
        .tangent(s)
        .ok_or(Error::DegenerateSegment { segment: seg, s })?;
    Ok(BoundarySample {
        point: segment.eval(s),
        normal: Point::new(-tangent.y, tangent.x),
        segment: seg,
        param: s,
        curvature: segment.curvature(s),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pt;
    use approx::assert_relative_eq;

    #[test]
    fn arc_derivatives_match_finite_differences() {
        let arc = Segment::Arc { center: pt(0.3, -0.2), radius: 1.7, start_angle: 0.4, sweep: -2.1 };
        let h = 1e-6;
        for &s in &[0.1, 0.5, 0.9] {
            let fd1 = (arc.eval(s + h) - arc.eval(s - h)) / (2.0 * h);
            let fd2 = (arc.eval(s + h) - arc.eval(s) * 2.0 + arc.eval(s - h)) / (h * h);
            assert!((fd1 - arc.d1(s)).norm() < 1e-6);
            assert!((fd2 - arc.d2(s)).norm() < 1e-2);
        }
        // clockwise arc turns right
        assert_relative_eq!(arc.curvature(0.3), -1.0 / 1.7, max_relative = 1e-12);
    }

    #[test]
    fn newton_projection_on_arc() {
        let arc = full_circle(Point::zeros(), 2.0, true);
        let s = arc.closest_parameter(pt(0.0, 3.0), 0.2);
        assert!((arc.eval(s) - pt(0.0, 2.0)).norm() < 1e-12);
    }

    #[test]
    fn zero_length_line_is_degenerate() {
        let segs = [Segment::Line { start: pt(1.0, 1.0), end: pt(1.0, 1.0) }];
        assert!(sample_at(&segs, 0, 0.5).is_err());
    }
}
