use nalgebra::{DMatrix, DVector};
use std::collections::BTreeMap;

use crate::{Error, GridDiscretization, Result};

/// Dirichlet `(-Delta)^m` on a masked grid, as a dense symmetric matrix.
#[derive(Debug, Clone)]
pub struct PolyharmonicOperator {
    pub matrix: DMatrix<f64>,
    pub h: f64,
    pub m: usize,
    pub dimension: usize,
}

/// Integer stencil of `h^{2m} (-Delta_h)^m` on the full lattice, obtained by
/// convolving the 3-point (1D) or 5-point (2D) stencil with itself.
pub fn polyharmonic_stencil(m: usize, dimension: usize) -> Vec<((i64, i64), f64)> {
    let mut base: BTreeMap<(i64, i64), f64> = BTreeMap::new();
    base.insert((0, 0), 2.0 * dimension as f64);
    base.insert((1, 0), -1.0);
    base.insert((-1, 0), -1.0);
    if dimension == 2 {
        base.insert((0, 1), -1.0);
        base.insert((0, -1), -1.0);
    }
    let mut stencil: BTreeMap<(i64, i64), f64> = BTreeMap::from([((0, 0), 1.0)]);
    for _ in 0..m {
        let mut next = BTreeMap::new();
        for (&(a, b), &c) in &stencil {
            for (&(da, db), &e) in &base {
                *next.entry((a + da, b + db)).or_insert(0.0) += c * e;
            }
        }
        stencil = next;
    }
    stencil.into_iter().filter(|(_, c)| *c != 0.0).collect()
}

/// Squared-stencil assembly with the exterior extended by zero. For `m = 2`
/// this is the clamped plate (beam in 1D), not the square of the Dirichlet
/// Laplacian matrix.
pub fn assemble_polyharmonic(grid: &GridDiscretization, m: usize) -> Result<PolyharmonicOperator> {
    if m == 0 {
        return Err(Error::InvalidParameter("order m must be >= 1".into()));
    }
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let n = grid.len();
    let dimension = grid.dimension();
    let h = grid.spacing();
    let scale = h.powi(-2 * m as i32);
    let stencil = polyharmonic_stencil(m, dimension);
    let mut matrix = DMatrix::zeros(n, n);
    for node in 0..n {
        for &((di, dj), c) in &stencil {
            if let Some(other) = grid.neighbor(node, di, dj) {
                matrix[(node, other)] = c * scale;
            }
        }
    }
    Ok(PolyharmonicOperator { matrix, h, m, dimension })
}

impl PolyharmonicOperator {
    pub fn len(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.nrows() == 0
    }

    /// `mu (-Delta)^m`, a constant-coefficient operator with Garding ratio `mu`.
    pub fn scaled(mut self, mu: f64) -> Self {
        self.matrix *= mu;
        self
    }

    pub fn is_symmetric(&self) -> bool {
        self.matrix == self.matrix.transpose()
    }

    /// Discrete form `Q(f) = h^N f^T A f`.
    pub fn quadratic_form(&self, f: &DVector<f64>) -> f64 {
        self.h.powi(self.dimension as i32) * f.dot(&(&self.matrix * f))
    }
}
