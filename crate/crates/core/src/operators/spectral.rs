use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::PolyharmonicOperator;
use crate::{Error, Result};

/// Largest matrix handed to the dense eigensolver.
pub const EIGEN_BUDGET: usize = 4000;

/// Terms with `exp(-(lambda_n - lambda_0) t)` below this are dropped.
const TRUNCATION: f64 = 1e-16;

/// Eigenpairs of a discrete operator, with eigenvectors scaled by `h^{-N/2}`
/// so that `sum_i phi(x_i)^2 h^N = 1`.
#[derive(Debug, Clone)]
pub struct SpectralHeatKernel {
    eigenvalues: DVector<f64>,
    /// Columns are eigenfunctions in node order.
    eigenvectors: DMatrix<f64>,
    h: f64,
    m: usize,
    dimension: usize,
}

/// Regression export of a spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSnapshot {
    pub eigenvalues: Vec<f64>,
    pub h: f64,
    pub m: usize,
    #[serde(rename = "N")]
    pub dimension: usize,
    pub node_count: usize,
}

pub fn spectral_decompose(op: &PolyharmonicOperator) -> Result<SpectralHeatKernel> {
    SpectralHeatKernel::from_matrix(op.matrix.clone(), op.h, op.m, op.dimension)
}

impl SpectralHeatKernel {
    pub fn from_matrix(matrix: DMatrix<f64>, h: f64, m: usize, dimension: usize) -> Result<Self> {
        let n = matrix.nrows();
        if n != matrix.ncols() {
            return Err(Error::InvalidParameter("matrix is not square".into()));
        }
        if n > EIGEN_BUDGET {
            return Err(Error::EigenBudget { dimension: n, budget: EIGEN_BUDGET });
        }
        if n == 0 {
            return Err(Error::EmptyGrid);
        }
        let eig = SymmetricEigen::new(matrix);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let scale = h.powf(-(dimension as f64) / 2.0);
        let eigenvalues = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
        let mut eigenvectors = DMatrix::zeros(n, n);
        for (col, &i) in order.iter().enumerate() {
            eigenvectors.set_column(col, &(eig.eigenvectors.column(i) * scale));
        }
        Ok(Self { eigenvalues, eigenvectors, h, m, dimension })
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    /// Eigenfunctions as columns, in continuum normalization.
    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn order(&self) -> usize {
        self.m
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// Cell volume `h^N`.
    pub fn cell(&self) -> f64 {
        self.h.powi(self.dimension as i32)
    }

    /// Number of modes kept at time `t`.
    pub fn modes(&self, t: f64) -> usize {
        let l0 = self.eigenvalues[0];
        self.eigenvalues.iter().take_while(|&&l| (-(l - l0) * t).exp() >= TRUNCATION).count()
    }

    fn check_time(t: f64) -> Result<()> {
        if t > 0.0 && t.is_finite() {
            Ok(())
        } else {
            Err(Error::NonPositiveTime(t))
        }
    }

    /// `K(t, x, y) = sum_n exp(-lambda_n t) phi_n(x) phi_n(y)` at nodes `x`, `y`.
    pub fn kernel(&self, t: f64, x: usize, y: usize) -> Result<f64> {
        Self::check_time(t)?;
        let modes = self.modes(t);
        Ok((0..modes)
            .map(|n| (-self.eigenvalues[n] * t).exp() * (self.eigenvectors[(x, n)] * self.eigenvectors[(y, n)]))
            .sum())
    }

    /// `K(t, x, x)` at every node.
    pub fn kernel_diagonal(&self, t: f64) -> Result<Vec<f64>> {
        Self::check_time(t)?;
        let modes = self.modes(t);
        let weights: Vec<f64> = (0..modes).map(|n| (-self.eigenvalues[n] * t).exp()).collect();
        Ok((0..self.len())
            .map(|x| weights.iter().enumerate().map(|(n, w)| w * self.eigenvectors[(x, n)].powi(2)).sum())
            .collect())
    }

    /// Full kernel matrix `K(t, x_i, x_j)`.
    pub fn kernel_matrix(&self, t: f64) -> Result<DMatrix<f64>> {
        Self::check_time(t)?;
        let modes = self.modes(t);
        let phi = self.eigenvectors.columns(0, modes);
        let mut weighted = phi.clone_owned();
        for n in 0..modes {
            let w = (-self.eigenvalues[n] * t).exp();
            weighted.column_mut(n).scale_mut(w);
        }
        Ok(weighted * phi.transpose())
    }

    /// Matrix of `exp(-A t)` acting on node vectors: `h^N K(t)`.
    pub fn semigroup(&self, t: f64) -> Result<DMatrix<f64>> {
        Ok(self.kernel_matrix(t)? * self.cell())
    }

    pub fn snapshot(&self) -> SpectrumSnapshot {
        SpectrumSnapshot {
            eigenvalues: self.eigenvalues.iter().copied().collect(),
            h: self.h,
            m: self.m,
            dimension: self.dimension,
            node_count: self.len(),
        }
    }
}
