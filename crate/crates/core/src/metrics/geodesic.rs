use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use super::{visibility_shortest_path, MetricEstimate, MetricMethod};
use crate::{Domain, Error, GridDiscretization, Point, Result};

/// 16-neighbour stencil: axis, diagonal and knight moves.
const STENCIL: [(i64, i64); 16] = [
    (1, 0),
    (-1, 0),
    (0, 1),
    (0, -1),
    (1, 1),
    (1, -1),
    (-1, 1),
    (-1, -1),
    (1, 2),
    (1, -2),
    (-1, 2),
    (-1, -2),
    (2, 1),
    (2, -1),
    (-2, 1),
    (-2, -1),
];

#[derive(Clone, Copy, PartialEq)]
struct Entry {
    dist: f64,
    node: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.dist.total_cmp(&self.dist).then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortest paths on the masked grid graph, with off-grid endpoints attached
/// to the visible nodes around them.
#[derive(Debug, Clone)]
pub struct GeodesicSolver {
    grid: GridDiscretization,
    adjacency: Vec<Vec<(usize, f64)>>,
    attach_radius: f64,
    step: f64,
}

/// Single-source geodesic distances to every grid node.
#[derive(Debug, Clone)]
pub struct DistanceField {
    source: Point,
    dist: Vec<f64>,
}

impl GeodesicSolver {
    pub fn new(grid: &GridDiscretization) -> Self {
        let h = grid.spacing();
        let step = h / 8.0;
        let domain = grid.domain();
        let adjacency = (0..grid.len())
            .into_par_iter()
            .map(|n| {
                let p = grid.position(n);
                STENCIL
                    .iter()
                    .filter_map(|&(di, dj)| {
                        let m = grid.neighbor(n, di, dj)?;
                        let q = grid.position(m);
                        domain.segment_in_closure(p, q, step).then(|| (m, (q - p).norm()))
                    })
                    .collect()
            })
            .collect();
        Self { grid: grid.clone(), adjacency, attach_radius: 2.5 * h, step }
    }

    pub fn grid(&self) -> &GridDiscretization {
        &self.grid
    }

    pub fn domain(&self) -> &Domain {
        self.grid.domain()
    }

    pub fn spacing(&self) -> f64 {
        self.grid.spacing()
    }

    /// Metrication tolerance for a geodesic distance of size `d`.
    pub fn tolerance(&self, d: f64) -> f64 {
        super::grid_tolerance(d, self.grid.spacing())
    }

    fn closure_tol(&self) -> f64 {
        1e-9 * self.domain().diameter()
    }

    fn check_in_closure(&self, p: Point) -> Result<()> {
        if self.domain().in_closure(p, self.closure_tol()) {
            Ok(())
        } else {
            Err(Error::OutsideDomain(p))
        }
    }

    /// Visible nodes around `p`, with their straight-line distances.
    fn attachments(&self, p: Point) -> Vec<(usize, f64)> {
        let domain = self.domain();
        for scale in [1.0, 2.0, 4.0] {
            let found: Vec<(usize, f64)> = self
                .grid
                .nodes_within(p, self.attach_radius * scale)
                .into_iter()
                .filter_map(|n| {
                    let q = self.grid.position(n);
                    domain.segment_in_closure(p, q, self.step).then(|| (n, (q - p).norm()))
                })
                .collect();
            if !found.is_empty() {
                return found;
            }
        }
        Vec::new()
    }

    /// Dijkstra from an arbitrary point of the closed domain.
    pub fn distance_field(&self, source: Point) -> Result<DistanceField> {
        self.check_in_closure(source)?;
        let mut dist = vec![f64::INFINITY; self.grid.len()];
        let mut heap = BinaryHeap::new();
        for (n, d) in self.attachments(source) {
            if d < dist[n] {
                dist[n] = d;
                heap.push(Entry { dist: d, node: n });
            }
        }
        while let Some(Entry { dist: d, node }) = heap.pop() {
            if d > dist[node] {
                continue;
            }
            for &(m, w) in &self.adjacency[node] {
                let nd = d + w;
                if nd < dist[m] {
                    dist[m] = nd;
                    heap.push(Entry { dist: nd, node: m });
                }
            }
        }
        Ok(DistanceField { source, dist })
    }

    /// Geodesic distance from the field's source to `p`: the straight segment
    /// when visible, otherwise the best visible node plus its chord.
    pub fn field_value(&self, field: &DistanceField, p: Point) -> Option<f64> {
        let direct = self
            .domain()
            .segment_in_closure(field.source, p, self.step)
            .then(|| (p - field.source).norm());
        let via_grid = self
            .attachments(p)
            .into_iter()
            .map(|(n, d)| field.dist[n] + d)
            .fold(f64::INFINITY, f64::min);
        let best = direct.map_or(via_grid, |d| d.min(via_grid));
        best.is_finite().then_some(best)
    }

    /// Bracketing estimate of `d_g(x, y)`.
    ///
    /// Lower side is the chord; upper side is the chord when the segment is
    /// admissible, the exact visibility-graph path on polygons, and the grid
    /// shortest path otherwise.
    pub fn distance(&self, x: Point, y: Point) -> Result<MetricEstimate> {
        self.check_in_closure(x)?;
        self.check_in_closure(y)?;
        let chord = (y - x).norm();
        let domain = self.domain();
        if domain.segment_in_closure(x, y, self.step) {
            return Ok(MetricEstimate::exact(chord, MetricMethod::Euclidean));
        }
        if let Some(verts) = domain.polygon() {
            let d = visibility_shortest_path(domain, verts, x, y).ok_or(Error::Disconnected(x, y))?;
            return Ok(MetricEstimate { lower: chord, upper: d, method: MetricMethod::GeodesicVisibility });
        }
        let field = self.distance_field(x)?;
        self.distance_from_field(&field, y)
    }

    /// Same as [`Self::distance`] for a precomputed field.
    pub fn distance_from_field(&self, field: &DistanceField, y: Point) -> Result<MetricEstimate> {
        self.check_in_closure(y)?;
        let x = field.source;
        let chord = (y - x).norm();
        let domain = self.domain();
        if domain.segment_in_closure(x, y, self.step) {
            return Ok(MetricEstimate::exact(chord, MetricMethod::Euclidean));
        }
        if let Some(verts) = domain.polygon() {
            let d = visibility_shortest_path(domain, verts, x, y).ok_or(Error::Disconnected(x, y))?;
            return Ok(MetricEstimate { lower: chord, upper: d, method: MetricMethod::GeodesicVisibility });
        }
        let d = self.field_value(field, y).ok_or(Error::Disconnected(x, y))?;
        Ok(MetricEstimate { lower: chord, upper: d.max(chord), method: MetricMethod::GeodesicGrid })
    }
}

impl DistanceField {
    pub fn source(&self) -> Point {
        self.source
    }

    /// Distances at the grid nodes, in node order.
    pub fn node_distances(&self) -> &[f64] {
        &self.dist
    }
}
