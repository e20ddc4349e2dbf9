//! Gaussian bound expressions, the sharp decay constant, the free-space
//! kernel of `(-d^2/dx^2)^m`, and fitting of bound constants to kernel data.

mod free;
mod verify;

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::{Error, Result};

pub use free::{fit_decay_constant, free_kernel_fourier, free_kernel_origin, DecayFit};
pub use verify::{fit_amplitude, verify_bound, BoundReport, KernelSample};

/// `(2m-1) (2m)^{-2m/(2m-1)} sin(pi/(4m-2))`.
pub fn sigma_m(m: usize) -> f64 {
    assert!(m >= 1, "order must be >= 1");
    let m = m as f64;
    let q = 2.0 * m - 1.0;
    q * (2.0 * m).powf(-2.0 * m / q) * (PI / (4.0 * m - 2.0)).sin()
}

/// `(sigma_m - epsilon) mu^{-1/(2m-1)}`, the decay constant available for an
/// operator with Garding ratio `mu`.
pub fn sharp_decay_constant(m: usize, mu: f64, epsilon: f64) -> f64 {
    (sigma_m(m) - epsilon) * mu.powf(-1.0 / (2.0 * m as f64 - 1.0))
}

/// Constants of a Gaussian bound
/// `c1 t^{-N/2m} exp[-c2 d^{2m/(2m-1)} t^{-1/(2m-1)} + k t]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundParameters {
    pub c1: f64,
    pub c2: f64,
    #[serde(default)]
    pub k: f64,
    /// Time-to-distance threshold of the short-time form.
    #[serde(rename = "T", default, skip_serializing_if = "Option::is_none")]
    pub t_threshold: Option<f64>,
    pub m: usize,
    #[serde(rename = "N")]
    pub dimension: usize,
    #[serde(default = "one")]
    pub mu: f64,
    #[serde(default)]
    pub epsilon: f64,
}

fn one() -> f64 {
    1.0
}

impl BoundParameters {
    pub fn new(c1: f64, c2: f64, k: f64, m: usize, dimension: usize) -> Self {
        Self { c1, c2, k, t_threshold: None, m, dimension, mu: 1.0, epsilon: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c1 > 0.0) || !(self.c2 > 0.0) {
            return Err(Error::InvalidParameter("c1 and c2 must be positive".into()));
        }
        if self.m == 0 {
            return Err(Error::InvalidParameter("order m must be >= 1".into()));
        }
        if !(1..=2).contains(&self.dimension) {
            return Err(Error::InvalidParameter("dimension must be 1 or 2".into()));
        }
        if !(self.mu >= 1.0) {
            return Err(Error::InvalidParameter("mu must be >= 1".into()));
        }
        Ok(())
    }

    /// `2m/(2m-1)`.
    pub fn distance_exponent(&self) -> f64 {
        let m = self.m as f64;
        2.0 * m / (2.0 * m - 1.0)
    }

    /// `d^{2m/(2m-1)} t^{-1/(2m-1)}`.
    pub fn scaled_distance(&self, d: f64, t: f64) -> f64 {
        let m = self.m as f64;
        d.powf(self.distance_exponent()) * t.powf(-1.0 / (2.0 * m - 1.0))
    }
}

/// Right-hand side of the Gaussian bound; with `metric_exponent_active`
/// false the distance term is dropped (on-diagonal shape).
pub fn gaussian_bound_rhs(params: &BoundParameters, d: f64, t: f64, metric_exponent_active: bool) -> f64 {
    let n = params.dimension as f64;
    let m = params.m as f64;
    let decay = if metric_exponent_active { params.c2 * params.scaled_distance(d, t) } else { 0.0 };
    params.c1 * t.powf(-n / (2.0 * m)) * (-decay + params.k * t).exp()
}

/// `k = (c2 - eps) T^{-2m/(2m-1)} + 1`.
pub fn conequiv_forward(c2: f64, epsilon: f64, t_threshold: f64, m: usize) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < c2) {
        return Err(Error::InvalidParameter(format!("need 0 < epsilon < c2, got epsilon = {epsilon}, c2 = {c2}")));
    }
    if !(t_threshold > 0.0) || m == 0 {
        return Err(Error::InvalidParameter("need T > 0 and m >= 1".into()));
    }
    let m = m as f64;
    Ok((c2 - epsilon) * t_threshold.powf(-2.0 * m / (2.0 * m - 1.0)) + 1.0)
}

/// `T = (eps/k)^{(2m-1)/(2m)}`.
pub fn conequiv_backward(k: f64, epsilon: f64, m: usize) -> Result<f64> {
    if !(k > 0.0 && epsilon > 0.0) || m == 0 {
        return Err(Error::InvalidParameter("need k > 0, epsilon > 0 and m >= 1".into()));
    }
    let m = m as f64;
    Ok((epsilon / k).powf((2.0 * m - 1.0) / (2.0 * m)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma_m(1), 0.25);
        let direct = 3.0 * 4f64.powf(-4.0 / 3.0) * 0.5;
        assert!((sigma_m(2) - direct).abs() < 1e-16);
    }

    #[test]
    fn rhs_examples() {
        let p = BoundParameters::new((4.0 * PI).powf(-0.5), 0.25, 0.0, 1, 1);
        assert!((gaussian_bound_rhs(&p, 2.0, 1.0, true) - 0.103776874355).abs() < 1e-11);
        let q = BoundParameters::new(2.0, 0.3, 0.7, 2, 2);
        assert!((gaussian_bound_rhs(&q, 0.0, 0.5, true) - 2.0 * 0.5f64.powf(-0.5) * (0.35f64).exp()).abs() < 1e-14);
        assert_eq!(gaussian_bound_rhs(&q, 3.0, 0.5, false), gaussian_bound_rhs(&q, 0.0, 0.5, true));
        assert!(gaussian_bound_rhs(&q, 1.0, 1e-9, true) < 1e-100);
    }

    #[test]
    fn conequiv_examples() {
        assert!((conequiv_forward(0.25, 0.05, 1.0, 1).unwrap() - 1.2).abs() < 1e-15);
        assert!((conequiv_forward(1.0, 0.5, 0.5, 2).unwrap() - (0.5 * 0.5f64.powf(-4.0 / 3.0) + 1.0)).abs() < 1e-15);
        assert!((conequiv_forward(1.0, 0.5, 1e12, 2).unwrap() - 1.0).abs() < 1e-12);
        assert!(conequiv_forward(0.25, 0.25, 1.0, 1).is_err());
        assert_eq!(conequiv_backward(0.3, 0.3, 3).unwrap(), 1.0);
        assert!((conequiv_backward(2.0, 0.05, 1).unwrap() - 0.025f64.sqrt()).abs() < 1e-15);
        assert!((conequiv_backward(1.0, 0.1, 2).unwrap() - 0.1f64.powf(0.75)).abs() < 1e-15);
    }

    #[test]
    fn parameters_from_json() {
        let p: BoundParameters = serde_json::from_str(r#"{"c1": 1.0, "c2": 0.2, "m": 2, "N": 1}"#).unwrap();
        assert_eq!(p.mu, 1.0);
        assert!(p.validate().is_ok());
        assert!(serde_json::from_str::<BoundParameters>(r#"{"c1": 1.0, "c2": 0.2, "m": 2, "N": 1, "x": 0}"#).is_err());
    }
}
