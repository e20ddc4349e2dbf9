//! Seeded sampling of interior points and point pairs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::metrics::GeodesicSolver;
use crate::{pt, Domain, Error, Point, Result};

/// A sampled pair with its geodesic distance (grid upper estimate).
#[derive(Debug, Clone, Copy)]
pub struct SampledPair {
    pub x: Point,
    pub y: Point,
    pub geodesic: f64,
}

/// How the second point of a pair is drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PairMode {
    /// Both points uniform in the domain.
    Uniform,
    /// `y` uniform in the disc of this radius around `x`.
    Near(f64),
}

const MAX_ATTEMPTS: usize = 1_000_000;

/// Uniform point in the domain by rejection from the bounding box, kept at
/// least `margin` away from the boundary.
pub fn random_interior_point(domain: &Domain, rng: &mut impl Rng, margin: f64) -> Result<Point> {
    let (lo, hi) = domain.bounding_box();
    for _ in 0..MAX_ATTEMPTS {
        let p = pt(rng.random_range(lo.x..=hi.x), if domain.dimension() == 1 { 0.0 } else { rng.random_range(lo.y..=hi.y) });
        if domain.signed_distance(p) < -margin {
            return Ok(p);
        }
    }
    Err(Error::InvalidParameter("could not sample an interior point".into()))
}

/// `count` pairs with grid geodesic distance at least `min_geodesic`,
/// deterministic in `seed`.
pub fn sample_pairs(
    solver: &GeodesicSolver,
    count: usize,
    seed: u64,
    min_geodesic: f64,
    mode: PairMode,
) -> Result<Vec<SampledPair>> {
    let domain = solver.domain();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let margin = solver.spacing() * 1e-3;
    let mut pairs = Vec::with_capacity(count);
    let mut attempts = 0;
    while pairs.len() < count {
        attempts += 1;
        if attempts > 100 * count + 1000 {
            return Err(Error::InvalidParameter(format!(
                "only {} of {count} pairs found with geodesic distance >= {min_geodesic}",
                pairs.len()
            )));
        }
        let x = random_interior_point(domain, &mut rng, margin)?;
        let y = match mode {
            PairMode::Uniform => random_interior_point(domain, &mut rng, margin)?,
            PairMode::Near(radius) => {
                let r = radius * rng.random::<f64>().sqrt();
                let th = rng.random_range(0.0..std::f64::consts::TAU);
                let y = if domain.dimension() == 1 { pt(x.x + r * th.cos().signum(), 0.0) } else { x + r * pt(th.cos(), th.sin()) };
                if domain.signed_distance(y) >= -margin {
                    continue;
                }
                y
            }
        };
        let geodesic = solver.distance(x, y)?.upper;
        if geodesic >= min_geodesic {
            pairs.push(SampledPair { x, y, geodesic });
        }
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{GridDiscretization, Shape};

    #[test]
    fn pairs_are_reproducible_and_resolved() {
        let d = Domain::new(Shape::Annulus { r_in: 1.0, r_out: 2.0 }).unwrap();
        let g = GridDiscretization::with_cells(&d, 40).unwrap();
        let s = GeodesicSolver::new(&g);
        let a = sample_pairs(&s, 5, 7, 4.0 * g.spacing(), PairMode::Uniform).unwrap();
        let b = sample_pairs(&s, 5, 7, 4.0 * g.spacing(), PairMode::Uniform).unwrap();
        for (p, q) in a.iter().zip(&b) {
            assert_eq!(p.x, q.x);
            assert_eq!(p.y, q.y);
            assert!(p.geodesic >= 4.0 * g.spacing());
            assert!(d.inside(p.x) && d.inside(p.y));
        }
        let near = sample_pairs(&s, 5, 7, 4.0 * g.spacing(), PairMode::Near(1.0)).unwrap();
        assert!(near.iter().all(|p| (p.y - p.x).norm() <= 1.0));
    }
}
