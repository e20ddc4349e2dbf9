//! Scenario documents: one JSON file describes one reproducible run.

use std::path::Path;

use heatbound_core::{Domain, Shape};
use serde::Deserialize;

/// A configuration problem; reported with exit status 2.
#[derive(Debug)]
pub struct SchemaError(pub String);

impl std::fmt::Display for SchemaError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "schema error: {}", self.0)
    }
}

impl std::error::Error for SchemaError {}

fn schema<T>(msg: impl Into<String>) -> Result<T, SchemaError> {
    Err(SchemaError(msg.into()))
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub domain: Shape,
    /// Grid spacing; exactly one of `h` and `cells` (cells across the diameter).
    #[serde(default)]
    pub h: Option<f64>,
    #[serde(default)]
    pub cells: Option<usize>,
    #[serde(default = "one")]
    pub m: usize,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Overrides the rolling-ball radius, for domains with corners.
    #[serde(default)]
    pub reach: Option<f64>,
    #[serde(default)]
    pub betas: Vec<f64>,
    #[serde(default)]
    pub beta_scale: BetaScale,
    #[serde(default)]
    pub pairs: Option<PairSpec>,
    #[serde(default)]
    pub times: Vec<f64>,
    #[serde(default)]
    pub bounds: Vec<BoundSpec>,
    #[serde(default)]
    pub outputs: Outputs,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BetaScale {
    #[default]
    Absolute,
    /// Betas are multiples of `K/r`; admissible values start at 4.
    KOverR,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    /// Number of random pairs drawn with the scenario seed.
    #[serde(default)]
    pub count: Option<usize>,
    /// Explicit pairs `[x1, x2, y1, y2]`.
    #[serde(default)]
    pub explicit: Option<Vec<[f64; 4]>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Euclidean,
    Riemannian,
    Sharp,
}

impl BoundKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Euclidean => "euclidean",
            BoundKind::Riemannian => "riemannian",
            BoundKind::Sharp => "sharp",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundSpec {
    pub bound: BoundKind,
    /// Asserted amplitude; without it the fit is reported only.
    #[serde(default)]
    pub c1: Option<f64>,
    #[serde(default)]
    pub c2: Option<f64>,
    #[serde(default)]
    pub k: f64,
    /// Kernel time of a sharp fit.
    #[serde(default)]
    pub t: Option<f64>,
    /// Window in `z = d^{2m/(2m-1)} t^{-1/(2m-1)}` for a sharp fit.
    #[serde(default)]
    pub window: Option<[f64; 2]>,
    #[serde(default)]
    pub samples: Option<usize>,
    /// Asserted relative distance of the fitted decay constant from `sigma_m`.
    #[serde(default)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Outputs {
    pub metrics_csv: String,
    pub spectrum_json: String,
    pub diagonal_csv: String,
    pub bounds_json: String,
    pub ratios_csv: String,
    pub summary_json: String,
}

impl Default for Outputs {
    fn default() -> Self {
        Self {
            metrics_csv: "metrics.csv".into(),
            spectrum_json: "spectrum.json".into(),
            diagonal_csv: "diagonal.csv".into(),
            bounds_json: "bounds.json".into(),
            ratios_csv: "ratios.csv".into(),
            summary_json: "summary.json".into(),
        }
    }
}

/// Scenarios shipped with the binary, in listing order.
pub const BUNDLED: &[(&str, &str)] = &[
    ("convex-identity", include_str!("../scenarios/convex-identity.json")),
    ("horseshoe-sandwich", include_str!("../scenarios/horseshoe-sandwich.json")),
    ("horseshoe-contrast", include_str!("../scenarios/horseshoe-contrast.json")),
    ("interval-spectrum", include_str!("../scenarios/interval-spectrum.json")),
    ("sharpness-m1", include_str!("../scenarios/sharpness-m1.json")),
    ("sharpness-m2", include_str!("../scenarios/sharpness-m2.json")),
];

impl Scenario {
    pub fn parse(text: &str) -> Result<Self, SchemaError> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| SchemaError(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    /// Reads a file, or a bundled scenario when no such file exists.
    pub fn load(config: &Path) -> Result<Self, SchemaError> {
        if config.is_file() {
            let text = std::fs::read_to_string(config)
                .map_err(|e| SchemaError(format!("cannot read {}: {e}", config.display())))?;
            return Self::parse(&text);
        }
        let name = config.to_string_lossy();
        match BUNDLED.iter().find(|(n, _)| *n == name) {
            Some((_, text)) => Self::parse(text),
            None => schema(format!("{name}: no such file or bundled scenario")),
        }
    }

    pub fn wants_metrics(&self) -> bool {
        !self.betas.is_empty()
    }

    pub fn wants_pair_bounds(&self) -> bool {
        self.bounds.iter().any(|b| b.bound != BoundKind::Sharp)
    }

    pub fn wants_spectrum(&self) -> bool {
        !self.times.is_empty() || self.wants_pair_bounds()
    }

    fn validate(&self) -> Result<(), SchemaError> {
        let domain = Domain::new(self.domain).map_err(|e| SchemaError(format!("domain: {e}")))?;
        match (self.h, self.cells) {
            (Some(h), None) if h > 0.0 && h.is_finite() => {}
            (None, Some(c)) if c >= 4 => {}
            (None, None) => return schema("one of \"h\" and \"cells\" is required"),
            (Some(_), Some(_)) => return schema("give either \"h\" or \"cells\", not both"),
            _ => return schema("\"h\" must be positive and \"cells\" at least 4"),
        }
        if !(1..=6).contains(&self.m) {
            return schema(format!("m must be in 1..=6, got {}", self.m));
        }
        if let Some(r) = self.reach {
            if !(r > 0.0 && r.is_finite()) {
                return schema("\"reach\" must be positive");
            }
        }
        if self.betas.iter().any(|&b| !(b > 0.0 && b.is_finite())) {
            return schema("betas must be positive");
        }
        if self.beta_scale == BetaScale::KOverR && self.m == 1 {
            return schema("beta_scale \"k_over_r\" needs m >= 2 (K vanishes for m = 1)");
        }
        if self.times.iter().any(|&t| !(t > 0.0 && t.is_finite())) {
            return schema("times must be positive");
        }
        let needs_pairs = self.wants_metrics() || self.wants_pair_bounds();
        match (&self.pairs, needs_pairs) {
            (None, true) => return schema("\"pairs\" is required by the metric and kernel-bound stages"),
            (Some(p), _) => {
                match (p.count, &p.explicit) {
                    (Some(0), None) => return schema("pairs.count must be positive"),
                    (Some(_), None) if self.seed.is_none() => {
                        return schema("random pairs need a \"seed\" for reproducibility")
                    }
                    (Some(_), None) => {}
                    (None, Some(list)) if !list.is_empty() => {
                        for (i, q) in list.iter().enumerate() {
                            for p in [heatbound_core::pt(q[0], q[1]), heatbound_core::pt(q[2], q[3])] {
                                if !domain.inside(p) {
                                    return schema(format!("pairs.explicit[{i}]: ({}, {}) is not inside the domain", p.x, p.y));
                                }
                            }
                        }
                    }
                    _ => return schema("pairs needs exactly one of \"count\" and a non-empty \"explicit\""),
                }
                if domain.dimension() != 2 {
                    return schema("pair stages need a two-dimensional domain");
                }
            }
            (None, false) => {}
        }
        if self.wants_pair_bounds() && self.times.is_empty() {
            return schema("euclidean and riemannian bounds need \"times\"");
        }
        for (i, b) in self.bounds.iter().enumerate() {
            let at = |msg: &str| SchemaError(format!("bounds[{i}] ({}): {msg}", b.bound.name()));
            if b.c1.is_some_and(|c| !(c > 0.0)) {
                return Err(at("c1 must be positive"));
            }
            match b.bound {
                BoundKind::Sharp => {
                    let [lo, hi] = b.window.ok_or_else(|| at("\"window\" is required"))?;
                    if !(0.0 < lo && lo < hi) {
                        return Err(at("window must satisfy 0 < lo < hi"));
                    }
                    if b.t.is_some_and(|t| !(t > 0.0)) || b.samples.is_some_and(|n| n < 8) {
                        return Err(at("t must be positive and samples at least 8"));
                    }
                    if b.tolerance.is_some_and(|t| !(t > 0.0)) {
                        return Err(at("tolerance must be positive"));
                    }
                }
                _ => {
                    if !b.c2.is_some_and(|c| c > 0.0) {
                        return Err(at("a positive \"c2\" is required"));
                    }
                }
            }
        }
        if !(self.wants_metrics() || self.wants_spectrum() || !self.bounds.is_empty()) {
            return schema("nothing to do: give betas, times or bounds");
        }
        Ok(())
    }
}
