//! Masked regular lattice over a domain.

use crate::{pt, Domain, Error, Point, Result};

/// Lattice `origin + (i, j) h` restricted to nodes strictly inside the
/// domain. One-dimensional domains use `j = 0` only.
#[derive(Debug, Clone)]
pub struct GridDiscretization {
    domain: Domain,
    h: f64,
    origin: Point,
    /// Number of lattice steps along x and y (lattice indices run `0..=n`).
    extent: (usize, usize),
    coords: Vec<(usize, usize)>,
    positions: Vec<Point>,
    /// Dense map from lattice index to node index.
    lookup: Vec<Option<usize>>,
}

impl GridDiscretization {
    /// Lattice with spacing `h` anchored at the bounding-box minimum corner.
    pub fn new(domain: &Domain, h: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidParameter(format!("grid spacing must be positive, got {h}")));
        }
        let (lo, hi) = domain.bounding_box();
        let steps = |len: f64| ((len / h) * (1.0 + 1e-12)).round().max(0.0) as usize;
        let nx = steps(hi.x - lo.x).max(1);
        let ny = if domain.dimension() == 1 { 0 } else { steps(hi.y - lo.y).max(1) };
        let mut coords = Vec::new();
        let mut positions = Vec::new();
        let mut lookup = vec![None; (nx + 1) * (ny + 1)];
        for j in 0..=ny {
            for i in 0..=nx {
                let p = pt(lo.x + i as f64 * h, lo.y + j as f64 * h);
                if domain.inside(p) {
                    lookup[j * (nx + 1) + i] = Some(coords.len());
                    coords.push((i, j));
                    positions.push(p);
                }
            }
        }
        if coords.is_empty() {
            return Err(Error::EmptyGrid);
        }
        if coords.len() < 25 {
            return Err(Error::InvalidParameter(format!(
                "grid has {} nodes; at least 25 are required",
                coords.len()
            )));
        }
        Ok(Self { domain: domain.clone(), h, origin: lo, extent: (nx, ny), coords, positions, lookup })
    }

    /// Spacing chosen so that the longest bounding-box side has `cells` steps.
    pub fn with_cells(domain: &Domain, cells: usize) -> Result<Self> {
        if cells == 0 {
            return Err(Error::InvalidParameter("cell count must be positive".into()));
        }
        Self::new(domain, domain.diameter() / cells as f64)
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn dimension(&self) -> usize {
        self.domain.dimension()
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn position(&self, node: usize) -> Point {
        self.positions[node]
    }

    pub fn positions(&self) -> &[Point] {
        &self.positions
    }

    pub fn coords(&self, node: usize) -> (usize, usize) {
        self.coords[node]
    }

    /// Node at lattice offset `(di, dj)` from `node`, if it is in the domain.
    pub fn neighbor(&self, node: usize, di: i64, dj: i64) -> Option<usize> {
        let (i, j) = self.coords[node];
        self.node_at(i as i64 + di, j as i64 + dj)
    }

    /// Node at lattice index `(i, j)`, if it is in the domain.
    pub fn node_at(&self, i: i64, j: i64) -> Option<usize> {
        let (nx, ny) = self.extent;
        if i < 0 || j < 0 || i as usize > nx || j as usize > ny {
            return None;
        }
        self.lookup[j as usize * (nx + 1) + i as usize]
    }

    /// Node closest to `p` (not necessarily visible from it).
    pub fn nearest_node(&self, p: Point) -> Option<usize> {
        let (i, j) = self.lattice_coords(p);
        let mut best: Option<(usize, f64)> = None;
        for radius in 0..4i64 {
            for dj in -radius..=radius {
                for di in -radius..=radius {
                    if let Some(n) = self.node_at(i + di, j + dj) {
                        let d = (self.positions[n] - p).norm();
                        if best.is_none_or(|(_, bd)| d < bd) {
                            best = Some((n, d));
                        }
                    }
                }
            }
            if best.is_some() {
                break;
            }
        }
        best.map(|(n, _)| n)
    }

    /// Nodes within Euclidean distance `radius` of `p`.
    pub fn nodes_within(&self, p: Point, radius: f64) -> Vec<usize> {
        let (ci, cj) = self.lattice_coords(p);
        let reach = (radius / self.h).ceil() as i64 + 1;
        let mut out = Vec::new();
        let jr = if self.dimension() == 1 { 0 } else { reach };
        for dj in -jr..=jr {
            for di in -reach..=reach {
                if let Some(n) = self.node_at(ci + di, cj + dj) {
                    if (self.positions[n] - p).norm() <= radius {
                        out.push(n);
                    }
                }
            }
        }
        out
    }

    fn lattice_coords(&self, p: Point) -> (i64, i64) {
        (
            ((p.x - self.origin.x) / self.h).round() as i64,
            ((p.y - self.origin.y) / self.h).round() as i64,
        )
    }
}
