use rayon::prelude::*;
use serde::Serialize;

use super::{gaussian_bound_rhs, BoundParameters};

/// One kernel value `K(t, x, y)` with the distance `d(x, y)` it is tested against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelSample {
    pub t: f64,
    pub d: f64,
    pub value: f64,
}

/// Outcome of testing a bound on a set of kernel samples.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    /// `sup |K| / rhs` with `c1 = 1`; the smallest admissible `c1`.
    pub max_ratio: f64,
    pub violating_sample: Option<usize>,
    pub samples_checked: usize,
    pub pass: bool,
    /// Largest `c2` keeping the ratio at or below the given `c1`, if any.
    pub fitted_c2: Option<f64>,
}

/// `max_i |K_i| / rhs_i` with unit amplitude, and the index attaining it
/// (lowest index on ties).
pub fn fit_amplitude(samples: &[KernelSample], params: &BoundParameters) -> (f64, Option<usize>) {
    let unit = BoundParameters { c1: 1.0, ..*params };
    samples
        .par_iter()
        .enumerate()
        .map(|(i, s)| (s.value.abs() / gaussian_bound_rhs(&unit, s.d, s.t, true), i))
        .reduce(
            || (f64::NEG_INFINITY, usize::MAX),
            |a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a },
        )
        .into_pair()
}

trait IntoPair {
    fn into_pair(self) -> (f64, Option<usize>);
}

impl IntoPair for (f64, usize) {
    fn into_pair(self) -> (f64, Option<usize>) {
        if self.1 == usize::MAX {
            (0.0, None)
        } else {
            (self.0, Some(self.1))
        }
    }
}

/// Checks `|K| <= c1 t^{-N/2m} exp[-c2 d^{2m/(2m-1)} t^{-1/(2m-1)} + k t]` on
/// every sample and fits the extremal decay constant for the given `c1`.
pub fn verify_bound(samples: &[KernelSample], params: &BoundParameters) -> BoundReport {
    let (max_ratio, argmax) = fit_amplitude(samples, params);
    let pass = max_ratio <= params.c1;
    let passes = |c2: f64| fit_amplitude(samples, &BoundParameters { c2, ..*params }).0 <= params.c1;
    let fitted_c2 = if samples.is_empty() || !passes(0.0) {
        None
    } else {
        let mut hi = params.c2.max(1e-3);
        while passes(hi) && hi < 1e6 {
            hi *= 2.0;
        }
        if passes(hi) {
            Some(hi)
        } else {
            let mut lo = 0.0;
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if passes(mid) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Some(lo)
        }
    };
    BoundReport {
        max_ratio,
        violating_sample: if pass { None } else { argmax },
        samples_checked: samples.len(),
        pass,
        fitted_c2,
    }
}
