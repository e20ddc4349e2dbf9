//! The exponential bump `k(z) = c exp(-1/(1-|z|^2))` on the unit ball, its
//! analytic derivatives, and the constant
//! `K = sup_{1<=|j|<=m-1} (int |D^j k|)^{1/|j|}`.

use std::f64::consts::TAU;

use serde::Serialize;

use crate::quadrature::{scan_roots, GaussLegendre};
use crate::{Error, Result};

/// Multi-index over at most two coordinates.
pub type MultiIndex = [usize; 2];

/// Above this value of `w = 1/(1-|z|^2)` the bump and all its derivatives
/// are below the smallest normal double.
const W_CUTOFF: f64 = 700.0;

/// Polynomials `P_l` with `g^{(l)}(u) = P_l(w) e^{-w}` for
/// `g(u) = exp(-1/(1-u))`, `w = 1/(1-u)`. Coefficients in ascending order.
fn profile_polynomials(max_order: usize) -> Vec<Vec<f64>> {
    let mut polys = vec![vec![1.0]];
    for l in 0..max_order {
        // P_{l+1}(w) = w^2 (P_l'(w) - P_l(w))
        let p = &polys[l];
        let mut diff = vec![0.0; p.len()];
        for (i, c) in p.iter().enumerate() {
            diff[i] -= c;
            if i > 0 {
                diff[i - 1] += i as f64 * c;
            }
        }
        let mut next = vec![0.0; diff.len() + 2];
        next[2..].copy_from_slice(&diff);
        polys.push(next);
    }
    polys
}

fn eval_poly(p: &[f64], w: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * w + c)
}

/// One term `coeff * g^{(order)}(|z|^2) * z1^a * z2^b`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Term {
    coeff: f64,
    order: usize,
    powers: [u32; 2],
}

/// `D^j g(|z|^2)` as a sum of terms, by repeated application of
/// `d/dz_i [g^{(l)}(u) z^a] = 2 z_i g^{(l+1)}(u) z^a + a_i g^{(l)}(u) z^{a-e_i}`.
fn derivative_terms(j: MultiIndex) -> Vec<Term> {
    let mut terms = vec![Term { coeff: 1.0, order: 0, powers: [0, 0] }];
    for axis in 0..2 {
        for _ in 0..j[axis] {
            let mut next: Vec<Term> = Vec::new();
            let mut push = |t: Term| {
                if let Some(existing) = next.iter_mut().find(|e| e.order == t.order && e.powers == t.powers) {
                    existing.coeff += t.coeff;
                } else {
                    next.push(t);
                }
            };
            for t in &terms {
                let mut up = t.powers;
                up[axis] += 1;
                push(Term { coeff: 2.0 * t.coeff, order: t.order + 1, powers: up });
                if t.powers[axis] > 0 {
                    let mut down = t.powers;
                    down[axis] -= 1;
                    push(Term { coeff: t.coeff * t.powers[axis] as f64, order: t.order, powers: down });
                }
            }
            terms = next;
        }
    }
    terms
}

/// Smooth non-negative bump of unit integral supported in the closed unit ball.
#[derive(Debug, Clone, Serialize)]
pub struct MollifierKernel {
    order: usize,
    dimension: usize,
    /// `c` such that `c * int exp(-1/(1-|z|^2)) dz = 1`.
    normalization: f64,
    /// `(j, int_{B(0;1)} |D^j k|)` for `1 <= |j| <= m-1`.
    pub derivative_integrals: Vec<(MultiIndex, f64)>,
    /// `K_{m,N,k}`; zero when the index set is empty (`m = 1`).
    pub k_const: f64,
    #[serde(skip)]
    polys: Vec<Vec<f64>>,
}

impl MollifierKernel {
    /// Builds the kernel for order `m` in dimension `dimension` and computes
    /// the derivative integrals with `quadrature_points` Gauss nodes per
    /// panel, doubling panels until two levels agree to 1e-6 relative.
    pub fn new(m: usize, dimension: usize, quadrature_points: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("order m must be >= 1".into()));
        }
        if !(1..=2).contains(&dimension) {
            return Err(Error::InvalidParameter(format!("dimension must be 1 or 2, got {dimension}")));
        }
        let q = quadrature_points.max(4);
        let polys = profile_polynomials(m.max(2));
        let mut kernel = Self {
            order: m,
            dimension,
            normalization: 1.0,
            derivative_integrals: Vec::new(),
            k_const: 0.0,
            polys,
        };
        kernel.normalization = 1.0 / kernel.raw_mass();
        let mut k_const: f64 = 0.0;
        for total in 1..m {
            for j in multi_indices(total, dimension) {
                let integral = kernel.abs_derivative_integral(j, q)?;
                k_const = k_const.max(integral.powf(1.0 / total as f64));
                kernel.derivative_integrals.push((j, integral));
            }
        }
        kernel.k_const = k_const;
        Ok(kernel)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// `c * exp(-1/(1-s^2))` for radius `s`.
    pub fn radial_profile(&self, s: f64) -> f64 {
        let u = s * s;
        if u >= 1.0 {
            return 0.0;
        }
        let w = 1.0 / (1.0 - u);
        if w > W_CUTOFF {
            0.0
        } else {
            self.normalization * (-w).exp()
        }
    }

    /// `k(z)`; the second coordinate is ignored in one dimension.
    pub fn value(&self, z: [f64; 2]) -> f64 {
        let z = self.restrict(z);
        self.radial_profile((z[0] * z[0] + z[1] * z[1]).sqrt())
    }

    /// Analytic `D^j k(z)`.
    pub fn derivative(&self, j: MultiIndex, z: [f64; 2]) -> f64 {
        if self.dimension == 1 {
            assert_eq!(j[1], 0, "one-dimensional kernel has no second derivative axis");
        }
        let terms = derivative_terms(j);
        self.eval_terms(&terms, self.restrict(z))
    }

    fn restrict(&self, z: [f64; 2]) -> [f64; 2] {
        if self.dimension == 1 {
            [z[0], 0.0]
        } else {
            z
        }
    }

    fn eval_terms(&self, terms: &[Term], z: [f64; 2]) -> f64 {
        let u = z[0] * z[0] + z[1] * z[1];
        if u >= 1.0 {
            return 0.0;
        }
        let w = 1.0 / (1.0 - u);
        if w > W_CUTOFF {
            return 0.0;
        }
        let e = (-w).exp();
        let sum: f64 = terms
            .iter()
            .map(|t| {
                t.coeff
                    * eval_poly(&self.polys_for(t.order), w)
                    * z[0].powi(t.powers[0] as i32)
                    * z[1].powi(t.powers[1] as i32)
            })
            .sum();
        self.normalization * sum * e
    }

    fn polys_for(&self, order: usize) -> std::borrow::Cow<'_, [f64]> {
        if order < self.polys.len() {
            std::borrow::Cow::Borrowed(&self.polys[order])
        } else {
            std::borrow::Cow::Owned(profile_polynomials(order).pop().expect("polynomial"))
        }
    }

    fn raw_mass(&self) -> f64 {
        let rule = GaussLegendre::new(20);
        let g = |s: f64| {
            let u = s * s;
            if u >= 1.0 {
                0.0
            } else {
                (-1.0 / (1.0 - u)).exp()
            }
        };
        match self.dimension {
            1 => 2.0 * rule.integrate_composite(0.0, 1.0, 64, g),
            _ => TAU * rule.integrate_composite(0.0, 1.0, 64, |s| g(s) * s),
        }
    }

    /// `int_{B(0;1)} |D^j k|` with root splitting along rays.
    fn abs_derivative_integral(&self, j: MultiIndex, q: usize) -> Result<f64> {
        let terms = derivative_terms(j);
        let rule = GaussLegendre::new(q);
        let mut previous: Option<f64> = None;
        let mut panels = 2usize;
        for _level in 0..8 {
            let value = match self.dimension {
                1 => self.radial_abs_integral(&terms, &rule, panels, [1.0, 0.0], false)
                    + self.radial_abs_integral(&terms, &rule, panels, [-1.0, 0.0], false),
                _ => {
                    let sectors = 8 * panels;
                    let width = TAU / sectors as f64;
                    (0..sectors)
                        .map(|k| {
                            let lo = k as f64 * width;
                            rule.integrate(lo, lo + width, |theta| {
                                self.radial_abs_integral(&terms, &rule, panels, [theta.cos(), theta.sin()], true)
                            })
                        })
                        .sum()
                }
            };
            if let Some(prev) = previous {
                let change = (value - prev).abs() / value.abs().max(f64::MIN_POSITIVE);
                if change < 1e-6 {
                    return Ok(value);
                }
                if panels >= 64 {
                    return Err(Error::QuadratureNonConvergence { relative_change: change });
                }
            }
            previous = Some(value);
            panels *= 2;
        }
        Err(Error::QuadratureNonConvergence { relative_change: f64::NAN })
    }

    /// `int_0^1 |D^j k(s e)| s^{polar} ds` along the unit direction `e`.
    fn radial_abs_integral(
        &self,
        terms: &[Term],
        rule: &GaussLegendre,
        panels: usize,
        e: [f64; 2],
        polar: bool,
    ) -> f64 {
        let f = |s: f64| self.eval_terms(terms, [s * e[0], s * e[1]]);
        let mut cuts = vec![0.0];
        cuts.extend(scan_roots(f, 0.0, 1.0, 256));
        cuts.push(1.0);
        cuts.windows(2)
            .map(|w| {
                rule.integrate_composite(w[0], w[1], panels, |s| {
                    let v = f(s).abs();
                    if polar {
                        v * s
                    } else {
                        v
                    }
                })
            })
            .sum()
    }

    /// Quadrature rule on the unit ball weighted by `k`.
    pub fn ball_rule(&self, points_per_axis: usize) -> BallRule {
        BallRule::new(self, points_per_axis)
    }
}

/// All multi-indices of total order `total` in `dimension` variables.
fn multi_indices(total: usize, dimension: usize) -> Vec<MultiIndex> {
    match dimension {
        1 => vec![[total, 0]],
        _ => (0..=total).rev().map(|a| [a, total - a]).collect(),
    }
}

/// Nodes `z_i` in the unit ball and weights `w_i ~ k(z_i) dz` summing to one;
/// `int g(y + rho z) k(z) dz ~ sum_i w_i g(y + rho z_i)`.
#[derive(Debug, Clone)]
pub struct BallRule {
    pub nodes: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
}

impl BallRule {
    /// Gauss-Legendre in the radius times the periodic trapezoid rule in the
    /// angle (two dimensions), or Gauss-Legendre on [-1, 1] (one dimension).
    /// At least `n^N` nodes.
    pub fn new(kernel: &MollifierKernel, n: usize) -> Self {
        let n = n.max(3);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        match kernel.dimension {
            1 => {
                let rule = GaussLegendre::new(n);
                for (x, w) in rule.mapped(-1.0, 1.0) {
                    nodes.push([x, 0.0]);
                    weights.push(w * kernel.radial_profile(x.abs()));
                }
            }
            _ => {
                let rule = GaussLegendre::new(n);
                for (s, w) in rule.mapped(0.0, 1.0) {
                    for k in 0..n {
                        let theta = TAU * (k as f64 + 0.5) / n as f64;
                        nodes.push([s * theta.cos(), s * theta.sin()]);
                        weights.push(w * s * (TAU / n as f64) * kernel.radial_profile(s));
                    }
                }
            }
        }
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}
