use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Constant-coefficient principal symbol in two variables,
/// `a(xi) = sum_{|k|=2m} (2m)!/k! a_k xi^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolSpec {
    pub m: usize,
    /// `a_k` keyed by the exponent pair `k = (k1, k2)`, `k1 + k2 = 2m`.
    pub coefficients: BTreeMap<(usize, usize), f64>,
}

/// Result of the strong convexity test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityCheck {
    pub convex: bool,
    pub min_eigenvalue: f64,
    /// Vector `zeta` over the order-m multi-indices with `zeta^T Gamma zeta < 0`.
    pub witness: Option<Vec<f64>>,
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

impl SymbolSpec {
    /// `|xi|^{2m}` written as `sum (2m)!/k! a_k xi^k`.
    pub fn polyharmonic(m: usize) -> Self {
        let mut coefficients = BTreeMap::new();
        for l in 0..=m {
            // |xi|^{2m} = sum_l C(m,l) xi1^{2l} xi2^{2m-2l}
            let binom = factorial(m) / (factorial(l) * factorial(m - l));
            let k = (2 * l, 2 * m - 2 * l);
            let multinom = factorial(2 * m) / (factorial(k.0) * factorial(k.1));
            coefficients.insert(k, binom / multinom);
        }
        Self { m, coefficients }
    }

    /// Symbol whose form matrix is the given symmetric `Gamma` over the
    /// order-m multi-indices `(m, 0), (m-1, 1), ..., (0, m)`: each `a_k` is the
    /// average of the `Gamma` entries contributing to `xi^k`.
    pub fn from_gamma(m: usize, gamma: &DMatrix<f64>) -> Result<Self> {
        if gamma.nrows() != m + 1 || gamma.ncols() != m + 1 {
            return Err(Error::InvalidParameter(format!("Gamma must be {}x{}", m + 1, m + 1)));
        }
        let mut coefficients = BTreeMap::new();
        for s in 0..=2 * m {
            let entries: Vec<f64> = (0..=m)
                .filter_map(|p| s.checked_sub(p).filter(|q| *q <= m).map(|q| gamma[(p, q)]))
                .collect();
            let a = entries.iter().sum::<f64>() / entries.len() as f64;
            coefficients.insert((2 * m - s, s), a);
        }
        Ok(Self { m, coefficients })
    }

    pub fn coefficient(&self, k: (usize, usize)) -> f64 {
        self.coefficients.get(&k).copied().unwrap_or(0.0)
    }

    /// `a(xi)` on a real covector.
    pub fn evaluate(&self, xi: [f64; 2]) -> f64 {
        let two_m = 2 * self.m;
        self.coefficients
            .iter()
            .map(|(&(k1, k2), &a)| {
                factorial(two_m) / (factorial(k1) * factorial(k2)) * a * xi[0].powi(k1 as i32) * xi[1].powi(k2 as i32)
            })
            .sum()
    }

    /// `Gamma_{pq} = a_{p+q}` over the multi-indices of order m, indexed by
    /// the second component.
    pub fn gamma(&self) -> DMatrix<f64> {
        let m = self.m;
        DMatrix::from_fn(m + 1, m + 1, |p, q| self.coefficient((2 * m - p - q, p + q)))
    }

    /// Extremal ratios `a(xi)/|xi|^{2m}` over `samples` unit covectors.
    pub fn ellipticity_range(&self, samples: usize) -> (f64, f64) {
        (0..samples.max(4))
            .map(|i| {
                let th = std::f64::consts::TAU * i as f64 / samples.max(4) as f64;
                self.evaluate([th.cos(), th.sin()])
            })
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
    }
}

/// Positivity of the quadratic form induced by the symbol.
pub fn strong_convexity_check(symbol: &SymbolSpec) -> ConvexityCheck {
    let eig = SymmetricEigen::new(symbol.gamma());
    let (idx, &min_eigenvalue) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty Gamma");
    let convex = min_eigenvalue >= -1e-10;
    let witness = (!convex).then(|| {
        let v: DVector<f64> = eig.eigenvectors.column(idx).into();
        v.iter().copied().collect()
    });
    ConvexityCheck { convex, min_eigenvalue, witness }
}

/// Garding data `lambda Q_m - c ||f||^2 <= Q <= mu Q_m + d ||f||^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticFormSpec {
    pub m: usize,
    #[serde(rename = "N")]
    pub dimension: usize,
    pub lambda: f64,
    pub mu: f64,
    pub c_shift: f64,
    pub d_shift: f64,
    pub homogeneous: bool,
}

impl EllipticFormSpec {
    /// Homogeneous `mu (-Delta)^m`.
    pub fn polyharmonic(m: usize, dimension: usize, mu: f64) -> Result<Self> {
        let spec = Self { m, dimension, lambda: mu, mu, c_shift: 0.0, d_shift: 0.0, homogeneous: true };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || !(1..=2).contains(&self.dimension) {
            return Err(Error::InvalidParameter("need m >= 1 and N in {1, 2}".into()));
        }
        if !(self.lambda > 0.0 && self.lambda <= self.mu) {
            return Err(Error::InvalidParameter(format!("need 0 < lambda <= mu, got {} and {}", self.lambda, self.mu)));
        }
        if self.c_shift < 0.0 || self.d_shift < 0.0 {
            return Err(Error::InvalidParameter("zero-order shifts must be nonnegative".into()));
        }
        if self.homogeneous && (self.c_shift != 0.0 || self.d_shift != 0.0) {
            return Err(Error::InvalidParameter("homogeneous forms have zero shifts".into()));
        }
        Ok(())
    }

    /// `mu / lambda`.
    pub fn ratio(&self) -> f64 {
        self.mu / self.lambda
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn biharmonic_gamma() {
        let s = SymbolSpec::polyharmonic(2);
        let g = s.gamma();
        let expected = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 1.0 / 3.0, 0.0, 1.0 / 3.0, 0.0, 1.0 / 3.0, 0.0, 1.0]);
        assert!((g - expected).abs().max() < 1e-15);
        assert!(strong_convexity_check(&s).convex);
        let (lo, hi) = s.ellipticity_range(64);
        assert!((lo - 1.0).abs() < 1e-12 && (hi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn indefinite_table() {
        let mut coefficients = BTreeMap::new();
        coefficients.insert((4, 0), 1.0);
        coefficients.insert((0, 4), 1.0);
        coefficients.insert((2, 2), -1.0);
        let s = SymbolSpec { m: 2, coefficients };
        let c = strong_convexity_check(&s);
        assert!(!c.convex);
        let w = DVector::from_vec(c.witness.unwrap());
        assert!(w.dot(&(s.gamma() * &w)) < 0.0);
    }

    #[test]
    fn garding_validation() {
        assert!(EllipticFormSpec::polyharmonic(2, 2, 1.0).is_ok());
        let bad = EllipticFormSpec { c_shift: 1.0, ..EllipticFormSpec::polyharmonic(1, 1, 1.0).unwrap() };
        assert!(bad.validate().is_err());
    }
}
