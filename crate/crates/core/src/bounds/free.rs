use std::f64::consts::PI;

use serde::Serialize;

use crate::quadrature::adaptive_gk15;
use crate::{Error, Result};

/// `exp(-41.4)` is below 1e-18: the symbol is cut where `xi^{2m} t = 41.4`.
const SYMBOL_CUTOFF: f64 = 41.4;

/// Relative amplitude below which cancellation eats the answer.
const FLOOR: f64 = 1e-13;

fn check(m: usize, t: f64) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidParameter("order m must be >= 1".into()));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::NonPositiveTime(t));
    }
    Ok(())
}

/// `(1/pi) int_0^inf exp(-xi^{2m} t) cos(xi d) dxi` on half-period panels.
fn fourier_integral(m: usize, t: f64, d: f64) -> f64 {
    let two_m = 2 * m as i32;
    let xi_max = (SYMBOL_CUTOFF / t).powf(1.0 / two_m as f64);
    let panel = if d > 0.0 { (PI / d).min(xi_max) } else { xi_max };
    let count = (xi_max / panel).ceil() as usize;
    let scale = xi_max / count as f64;
    let integrand = |xi: f64| (-xi.powi(two_m) * t).exp() * (xi * d).cos();
    let abs_tol = 1e-17 * xi_max;
    let total: f64 = (0..count)
        .map(|i| {
            let a = i as f64 * scale;
            adaptive_gk15(integrand, a, a + scale, abs_tol / count as f64, 1e-13, 200).value
        })
        .sum();
    total / PI
}

/// `K(t, 0, 0)` of the free kernel; `Gamma(1 + 1/2m) / (pi t^{1/2m})`.
pub fn free_kernel_origin(m: usize, t: f64) -> Result<f64> {
    check(m, t)?;
    Ok(fourier_integral(m, t, 0.0))
}

/// `K(t, 0, d)` for `(-d^2/dx^2)^m` on the line, by adaptive Gauss-Kronrod
/// quadrature of the inverse Fourier transform. Fails when `|K|` drops
/// below `1e-13 K(t, 0, 0)`.
pub fn free_kernel_fourier(m: usize, dimension: usize, t: f64, d: f64) -> Result<f64> {
    if dimension != 1 {
        return Err(Error::InvalidParameter("free kernel quadrature is one-dimensional".into()));
    }
    check(m, t)?;
    let d = d.abs();
    let value = fourier_integral(m, t, d);
    if d > 0.0 {
        let origin = fourier_integral(m, t, 0.0);
        if value.abs() < FLOOR * origin {
            return Err(Error::BelowQuadratureFloor { value: value.abs() });
        }
    }
    Ok(value)
}

/// Least-squares fit of `-ln|K| - p ln z = c2 z + b` with
/// `z = d^{2m/(2m-1)} t^{-1/(2m-1)}` over a window of `z`.
#[derive(Debug, Clone, Serialize)]
pub struct DecayFit {
    pub m: usize,
    pub t: f64,
    pub window: (f64, f64),
    pub c2: f64,
    pub intercept: f64,
    /// Exponent of the algebraic prefactor `z^{-(m-1)/(2m)}` removed before fitting.
    pub prefactor: f64,
    /// `(z, |K|)` pairs used by the fit.
    pub points: Vec<(f64, f64)>,
}

/// Fits the decay constant of the free kernel at time `t`.
///
/// For `m >= 2` the kernel oscillates, so only the local maxima of `|K|` in
/// the window enter the fit; for `m = 1` every sample does.
pub fn fit_decay_constant(m: usize, t: f64, window: (f64, f64), samples: usize) -> Result<DecayFit> {
    check(m, t)?;
    let (z_lo, z_hi) = window;
    if !(0.0 < z_lo && z_lo < z_hi) || samples < 8 {
        return Err(Error::InvalidParameter("need 0 < z_lo < z_hi and at least 8 samples".into()));
    }
    let mf = m as f64;
    let q = 2.0 * mf - 1.0;
    let to_d = |z: f64| (z * t.powf(1.0 / q)).powf(q / (2.0 * mf));
    let grid: Vec<f64> = (0..samples).map(|i| z_lo + (z_hi - z_lo) * i as f64 / (samples - 1) as f64).collect();
    let values = grid.iter().map(|&z| free_kernel_fourier(m, 1, t, to_d(z))).collect::<Result<Vec<f64>>>()?;
    let points: Vec<(f64, f64)> = if m == 1 {
        grid.iter().zip(&values).map(|(&z, &v)| (z, v.abs())).collect()
    } else {
        (1..samples - 1)
            .filter(|&i| values[i].abs() > values[i - 1].abs() && values[i].abs() >= values[i + 1].abs())
            .map(|i| (grid[i], values[i].abs()))
            .collect()
    };
    if points.len() < 2 {
        return Err(Error::InvalidParameter("window contains fewer than two usable samples".into()));
    }
    let prefactor = (mf - 1.0) / (2.0 * mf);
    let (slope, intercept) = least_squares(points.iter().map(|&(z, k)| (z, -k.ln() - prefactor * z.ln())));
    Ok(DecayFit { m, t, window, c2: slope, intercept, prefactor, points })
}

fn least_squares(data: impl Iterator<Item = (f64, f64)>) -> (f64, f64) {
    let data: Vec<(f64, f64)> = data.collect();
    let n = data.len() as f64;
    let mx = data.iter().map(|p| p.0).sum::<f64>() / n;
    let my = data.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = data.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = data.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_closed_form() {
        let k = free_kernel_fourier(1, 1, 1.0, 2.0).unwrap();
        let exact = (4.0 * PI).powf(-0.5) * (-1.0f64).exp();
        assert!(((k - exact) / exact).abs() < 1e-10);
    }

    #[test]
    fn floor_is_reported() {
        assert!(matches!(free_kernel_fourier(1, 1, 1.0, 20.0), Err(Error::BelowQuadratureFloor { .. })));
        assert!(free_kernel_fourier(1, 2, 1.0, 1.0).is_err());
        assert!(free_kernel_fourier(1, 1, 0.0, 1.0).is_err());
    }

    #[test]
    fn biharmonic_kernel_changes_sign() {
        let values: Vec<f64> = (0..40).map(|i| free_kernel_fourier(2, 1, 1.0, 0.5 * i as f64).unwrap()).collect();
        assert!(values.iter().any(|v| *v < 0.0));
    }
}
