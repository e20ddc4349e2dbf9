use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use super::{PolyharmonicOperator, SpectralHeatKernel};
use crate::{Error, GridDiscretization, Result};

/// Largest admitted `alpha * (max phi - min phi)`.
pub const TWIST_GUARD: f64 = 200.0;

/// `clamp(x_1 - c, -1/beta, 1/beta)` with `c` the bounding-box midpoint:
/// 1-Lipschitz and bounded, hence admissible for first-order operators.
pub fn linear_ramp(grid: &GridDiscretization, beta: f64) -> DVector<f64> {
    let (lo, hi) = grid.domain().bounding_box();
    let c = 0.5 * (lo.x + hi.x);
    let cap = 1.0 / beta;
    DVector::from_iterator(grid.len(), grid.positions().iter().map(|p| (p.x - c).clamp(-cap, cap)))
}

/// `e^{alpha (phi - mean)}` and its inverse, after the overflow guard.
fn weights(phi: &DVector<f64>, alpha: f64) -> Result<(DVector<f64>, DVector<f64>)> {
    let range = phi.max() - phi.min();
    if alpha.abs() * range > TWIST_GUARD {
        return Err(Error::TwistOverflow(alpha.abs() * range));
    }
    let mean = phi.mean();
    let d = phi.map(|v| (alpha * (v - mean)).exp());
    let dinv = d.map(|v| 1.0 / v);
    Ok((d, dinv))
}

/// `|| e^{alpha phi} e^{-Ht} e^{-alpha phi} ||_2`.
pub fn twisted_semigroup_norm(spectrum: &SpectralHeatKernel, phi: &DVector<f64>, alpha: f64, t: f64) -> Result<f64> {
    if phi.len() != spectrum.len() {
        return Err(Error::InvalidParameter("phi must have one value per node".into()));
    }
    let (d, dinv) = weights(phi, alpha)?;
    let mut m = spectrum.semigroup(t)?;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            m[(i, j)] *= d[i] * dinv[j];
        }
    }
    Ok(operator_norm(&m))
}

/// Largest singular value by power iteration on `M^T M` (relative change
/// below 1e-8), with a full SVD if the iteration stalls.
pub fn operator_norm(m: &DMatrix<f64>) -> f64 {
    let n = m.ncols();
    let mut v = DVector::from_fn(n, |i, _| 1.0 + 0.1 * ((i * 2654435761) % 97) as f64 / 97.0);
    v /= v.norm();
    let mut estimate = 0.0;
    for _ in 0..3000 {
        let w = m.tr_mul(&(m * &v));
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        let next = norm.sqrt();
        v = w / norm;
        if (next - estimate).abs() <= 1e-8 * next {
            return next;
        }
        estimate = next;
    }
    m.clone().singular_values().max()
}

/// One sample of the twisted semigroup scan.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TwistSample {
    pub alpha: f64,
    pub beta: f64,
    pub t: f64,
    pub norm: f64,
}

/// Norms of the twisted semigroup for every `(alpha, beta, t)` triple, with
/// the ramp `linear_ramp(grid, beta)` as twist.
pub fn twist_scan(
    spectrum: &SpectralHeatKernel,
    grid: &GridDiscretization,
    alphas: &[f64],
    betas: &[f64],
    times: &[f64],
) -> Result<Vec<TwistSample>> {
    let mut triples = Vec::new();
    for &alpha in alphas {
        for &beta in betas {
            for &t in times {
                triples.push((alpha, beta, t));
            }
        }
    }
    triples
        .into_par_iter()
        .map(|(alpha, beta, t)| {
            let phi = linear_ramp(grid, beta);
            let norm = twisted_semigroup_norm(spectrum, &phi, alpha, t)?;
            Ok(TwistSample { alpha, beta, t, norm })
        })
        .collect()
}

/// Smallest `k >= 0` with `norm <= exp[k (1 + alpha^p + beta^p) t]` on every
/// sample, for exponent `p`.
pub fn fit_growth_rate(samples: &[TwistSample], exponent: f64) -> f64 {
    samples
        .iter()
        .map(|s| s.norm.ln() / ((1.0 + s.alpha.powf(exponent) + s.beta.powf(exponent)) * s.t))
        .fold(0.0, f64::max)
}

/// Untwisted and twisted discrete forms `h^N f^T A f` and
/// `h^N f^T e^{alpha phi} A e^{-alpha phi} f`, and `||f||^2`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FormSample {
    pub alpha: f64,
    pub beta: f64,
    pub q: f64,
    pub q_twisted: f64,
    pub norm_sq: f64,
}

pub fn twisted_form(op: &PolyharmonicOperator, phi: &DVector<f64>, alpha: f64, beta: f64, f: &DVector<f64>) -> Result<FormSample> {
    let (d, dinv) = weights(phi, alpha)?;
    let cell = op.h.powi(op.dimension as i32);
    let af = &op.matrix * f;
    let g = f.component_mul(&dinv);
    let twisted = (&op.matrix * g).component_mul(&d);
    Ok(FormSample {
        alpha,
        beta,
        q: cell * f.dot(&af),
        q_twisted: cell * f.dot(&twisted),
        norm_sq: cell * f.norm_squared(),
    })
}

/// Smallest `c_eps >= 0` with
/// `|Q_twisted - Q| <= eps Q + c_eps (1 + alpha^{2m} + beta^{2m}) ||f||^2`.
pub fn fit_form_constant(samples: &[FormSample], epsilon: f64, m: usize) -> f64 {
    let p = 2 * m as i32;
    samples
        .iter()
        .map(|s| {
            let excess = (s.q_twisted - s.q).abs() - epsilon * s.q;
            excess / ((1.0 + s.alpha.powi(p) + s.beta.powi(p)) * s.norm_sq)
        })
        .fold(0.0, f64::max)
}
