//! Stage pipeline: geometry, metrics, operators, bounds.

use std::path::Path;

use anyhow::Context;
use heatbound_core::bounds::{fit_decay_constant, sigma_m, verify_bound, BoundParameters, KernelSample};
use heatbound_core::geometry::{analytic_reach, estimate_reach};
use heatbound_core::metrics::{grid_tolerance, GeodesicSolver, RiemannianTypeEstimator};
use heatbound_core::operators::{assemble_polyharmonic, spectral_decompose, SpectralHeatKernel, EIGEN_BUDGET};
use heatbound_core::sampling::{sample_pairs, PairMode};
use heatbound_core::{pt, Domain, GridDiscretization, MollifierKernel, Point};
use log::{debug, info};
use rayon::prelude::*;
use serde::Serialize;

use crate::output::{write_csv, write_json, BoundRow, DiagonalRow, MetricRow, RatioRow};
use crate::scenario::{BetaScale, BoundKind, BoundSpec, Scenario, SchemaError};

/// Quadrature points per axis of the ball rule behind the test functions.
const RULE_POINTS: usize = 33;

/// Kernel values below this fraction of `sqrt(K(t,x,x) K(t,y,y))` are round-off.
const KERNEL_FLOOR: f64 = 1e-10;

/// Exceeded the dense eigensolver budget; exit status 3.
#[derive(Debug)]
pub struct BudgetError(pub String);

impl std::fmt::Display for BudgetError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "numerical budget exceeded: {}", self.0)
    }
}

impl std::error::Error for BudgetError {}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub scenario: String,
    pub nodes: usize,
    pub h: f64,
    pub reach: Option<f64>,
    pub checks: Vec<Check>,
}

impl Summary {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

struct Pair {
    x: Point,
    y: Point,
}

pub fn run_scenario(scenario: &Scenario, out_dir: &Path) -> anyhow::Result<Summary> {
    std::fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let domain = Domain::new(scenario.domain)?;
    let grid = match (scenario.h, scenario.cells) {
        (Some(h), _) => GridDiscretization::new(&domain, h),
        (_, Some(c)) => GridDiscretization::with_cells(&domain, c),
        _ => unreachable!("validated"),
    }
    .map_err(|e| SchemaError(format!("grid: {e}")))?;
    let h = grid.spacing();
    info!("{}: {} nodes, h = {h:.5}", domain.shape().name(), grid.len());

    let reach = scenario.reach.or_else(|| match estimate_reach(&domain, 2048, 1e-3 * domain.diameter()) {
        Ok(r) => Some(r.r),
        Err(e) => {
            debug!("no reach estimate: {e}");
            None
        }
    });
    if let Some(r) = reach {
        info!("reach {r:.5} (closed form {:?})", analytic_reach(domain.shape()));
    }

    let mut summary = Summary { scenario: scenario.name.clone(), nodes: grid.len(), h, reach, checks: Vec::new() };
    let solver = (domain.dimension() == 2 && scenario.pairs.is_some()).then(|| GeodesicSolver::new(&grid));
    let pairs = match (&scenario.pairs, &solver) {
        (Some(spec), Some(solver)) => match (&spec.explicit, spec.count) {
            (Some(list), _) => list.iter().map(|q| Pair { x: pt(q[0], q[1]), y: pt(q[2], q[3]) }).collect(),
            (None, Some(n)) => {
                let seed = scenario.seed.expect("validated");
                sample_pairs(solver, n, seed, 4.0 * h, PairMode::Uniform)?
                    .into_iter()
                    .map(|p| Pair { x: p.x, y: p.y })
                    .collect()
            }
            _ => unreachable!("validated"),
        },
        _ => Vec::new(),
    };

    if scenario.wants_metrics() {
        let solver = solver.as_ref().expect("validated");
        metrics_stage(scenario, &domain, solver, reach, &pairs, out_dir, &mut summary)?;
    }

    let spectrum = if scenario.wants_spectrum() {
        if grid.len() > EIGEN_BUDGET {
            return Err(BudgetError(format!(
                "{} nodes exceed the dense eigensolver budget of {EIGEN_BUDGET}; use a coarser grid",
                grid.len()
            ))
            .into());
        }
        let s = spectral_decompose(&assemble_polyharmonic(&grid, scenario.m)?)?;
        info!("spectrum: lambda_min = {:.6}, lambda_max = {:.6e}", s.lambda_min(), s.eigenvalues()[s.len() - 1]);
        write_json(&out_dir.join(&scenario.outputs.spectrum_json), &s.snapshot())?;
        operator_stage(scenario, &s, out_dir, &mut summary)?;
        Some(s)
    } else {
        None
    };

    if !scenario.bounds.is_empty() {
        let mut reports = Vec::new();
        let mut ratios = Vec::new();
        for spec in &scenario.bounds {
            let report = match spec.bound {
                BoundKind::Sharp => sharp_bound(scenario, spec, &mut summary)?,
                kind => {
                    let s = spectrum.as_ref().expect("validated");
                    let solver = solver.as_ref().expect("validated");
                    let samples = kernel_samples(s, solver, &grid, &pairs, &scenario.times, kind)?;
                    pair_bound(scenario, spec, &samples, &mut ratios, &mut summary)
                }
            };
            reports.push(report);
        }
        write_json(&out_dir.join(&scenario.outputs.bounds_json), &reports)?;
        if !ratios.is_empty() {
            write_csv(&out_dir.join(&scenario.outputs.ratios_csv), &scenario.name, &ratios)?;
        }
    }

    write_json(&out_dir.join(&scenario.outputs.summary_json), &summary)?;
    Ok(summary)
}

fn metrics_stage(
    scenario: &Scenario,
    domain: &Domain,
    solver: &GeodesicSolver,
    reach: Option<f64>,
    pairs: &[Pair],
    out_dir: &Path,
    summary: &mut Summary,
) -> anyhow::Result<()> {
    let kernel = MollifierKernel::new(scenario.m, 2, 16)?;
    let reach = match (reach, scenario.m) {
        (Some(r), _) => r,
        // the first-order estimate ignores the reach
        (None, 1) => domain.diameter(),
        (None, _) => {
            return Err(SchemaError(format!(
                "{} has no positive reach; set \"reach\" to use m = {}",
                domain.shape().name(),
                scenario.m
            ))
            .into())
        }
    };
    let estimator = RiemannianTypeEstimator::new(solver, &kernel, reach, RULE_POINTS)?;
    let betas: Vec<f64> = match scenario.beta_scale {
        BetaScale::Absolute => scenario.betas.clone(),
        BetaScale::KOverR => scenario.betas.iter().map(|f| f * kernel.k_const / reach).collect(),
    };
    info!("metrics: K = {:.6}, threshold 4K/r = {:.4}, betas {betas:?}", kernel.k_const, estimator.threshold());
    let h = solver.spacing();
    let name = domain.shape().name();
    let rows: Vec<Vec<MetricRow>> = pairs
        .par_iter()
        .map(|pair| {
            let field = solver.distance_field(pair.x)?;
            betas
                .iter()
                .map(|&beta| {
                    let e = estimator.estimate_with_field(&field, beta, pair.y)?;
                    let dg = e.geodesic.upper;
                    let tol = grid_tolerance(dg, h);
                    let pass = e.sandwich_factor * dg <= e.estimate.lower + 1e-12 * dg && e.estimate.lower <= dg + tol;
                    Ok(MetricRow {
                        domain: name,
                        m: scenario.m,
                        beta,
                        x1: pair.x.x,
                        x2: pair.x.y,
                        y1: pair.y.x,
                        y2: pair.y.y,
                        d0: e.euclidean,
                        dg_lower: e.geodesic.lower,
                        dg_upper: dg,
                        dmb_lower: e.estimate.lower,
                        sandwich_factor: e.sandwich_factor,
                        pass,
                    })
                })
                .collect::<heatbound_core::Result<Vec<_>>>()
        })
        .collect::<heatbound_core::Result<Vec<_>>>()?;
    let rows: Vec<MetricRow> = rows.into_iter().flatten().collect();
    write_csv(&out_dir.join(&scenario.outputs.metrics_csv), &scenario.name, &rows)?;

    let failed = rows.iter().filter(|r| !r.pass).count();
    summary.checks.push(Check {
        name: "metric sandwich".into(),
        pass: failed == 0,
        detail: format!("{failed} of {} rows outside [(1 - sqrt(K/(beta r))) d_g, d_g + tol]", rows.len()),
    });
    if domain.is_convex() {
        let worst = rows
            .iter()
            .map(|r| (r.dg_upper - r.d0).abs().max((r.dmb_lower - r.d0).abs()).max((r.dg_lower - r.d0).abs()))
            .fold(0.0, f64::max);
        summary.checks.push(Check {
            name: "convex collapse".into(),
            pass: worst <= 1e-12,
            detail: format!("max deviation of d_g and d_(m,beta) from |y - x|: {worst:.3e}"),
        });
    }
    Ok(())
}

fn operator_stage(scenario: &Scenario, s: &SpectralHeatKernel, out_dir: &Path, summary: &mut Summary) -> anyhow::Result<()> {
    if scenario.times.is_empty() {
        return Ok(());
    }
    let exponent = s.dimension() as f64 / (2.0 * s.order() as f64);
    let rows = scenario
        .times
        .iter()
        .map(|&t| {
            let sup = s.kernel_diagonal(t)?.into_iter().fold(0.0, f64::max);
            Ok(DiagonalRow { t, sup_diagonal: sup, scaled: sup * t.powf(exponent), lambda_min_t: s.lambda_min() * t })
        })
        .collect::<heatbound_core::Result<Vec<_>>>()?;
    write_csv(&out_dir.join(&scenario.outputs.diagonal_csv), &scenario.name, &rows)?;

    let t = scenario.times[0];
    let composed = s.semigroup(t)? * s.semigroup(t)?;
    let direct = s.semigroup(2.0 * t)?;
    let err = (composed - &direct).abs().max();
    summary.checks.push(Check {
        name: "semigroup identity".into(),
        pass: err <= 1e-8,
        detail: format!("max |e^(-tA) e^(-tA) - e^(-2tA)| = {err:.3e} at t = {t}"),
    });
    Ok(())
}

fn kernel_samples(
    s: &SpectralHeatKernel,
    solver: &GeodesicSolver,
    grid: &GridDiscretization,
    pairs: &[Pair],
    times: &[f64],
    kind: BoundKind,
) -> anyhow::Result<Vec<KernelSample>> {
    let per_pair = pairs
        .par_iter()
        .map(|pair| {
            let (Some(x), Some(y)) = (grid.nearest_node(pair.x), grid.nearest_node(pair.y)) else {
                return Ok(Vec::new());
            };
            let (px, py) = (grid.position(x), grid.position(y));
            let d = match kind {
                BoundKind::Euclidean => (py - px).norm(),
                _ => solver.distance_field(px)?.node_distances()[y],
            };
            let mut out = Vec::new();
            for &t in times {
                let value = s.kernel(t, x, y)?;
                let floor = KERNEL_FLOOR * (s.kernel(t, x, x)? * s.kernel(t, y, y)?).sqrt();
                if value.abs() > floor {
                    out.push(KernelSample { t, d, value });
                }
            }
            Ok(out)
        })
        .collect::<heatbound_core::Result<Vec<_>>>()?;
    Ok(per_pair.into_iter().flatten().collect())
}

fn pair_bound(
    scenario: &Scenario,
    spec: &BoundSpec,
    samples: &[KernelSample],
    ratios: &mut Vec<RatioRow>,
    summary: &mut Summary,
) -> BoundRow {
    let dimension = scenario.domain_dimension();
    let c2 = spec.c2.expect("validated");
    let params = BoundParameters::new(spec.c1.unwrap_or(1.0), c2, spec.k, scenario.m, dimension);
    let unit = BoundParameters { c1: 1.0, ..params };
    let report = verify_bound(samples, &params);
    for s in samples {
        let rhs = heatbound_core::bounds::gaussian_bound_rhs(&unit, s.d, s.t, true);
        ratios.push(RatioRow { bound: spec.bound.name(), t: s.t, d: s.d, value: s.value, ratio: s.value.abs() / rhs });
    }
    let fitted_c1 = report.max_ratio;
    let max_ratio = spec.c1.map_or(fitted_c1, |c1| fitted_c1 / c1);
    if let Some(c1) = spec.c1 {
        summary.checks.push(Check {
            name: format!("{} bound", spec.bound.name()),
            pass: report.pass,
            detail: format!("sup |K|/rhs = {fitted_c1:.4e} against c1 = {c1} over {} samples", samples.len()),
        });
    }
    let (lo, hi) = scenario.times.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &t| (a.min(t), b.max(t)));
    BoundRow {
        bound: spec.bound.name(),
        fitted_c2: report.fitted_c2,
        fitted_c1: Some(fitted_c1),
        k: spec.k,
        samples: samples.len(),
        max_ratio,
        window: [lo, hi],
    }
}

fn sharp_bound(scenario: &Scenario, spec: &BoundSpec, summary: &mut Summary) -> anyhow::Result<BoundRow> {
    let [lo, hi] = spec.window.expect("validated");
    let t = spec.t.unwrap_or(1.0);
    let fit = fit_decay_constant(scenario.m, t, (lo, hi), spec.samples.unwrap_or(400))?;
    let sigma = sigma_m(scenario.m);
    let relative = (fit.c2 - sigma).abs() / sigma;
    info!("sharp fit m = {}: c2 = {:.6} from {} points, sigma_m = {sigma:.6}", scenario.m, fit.c2, fit.points.len());
    if let Some(tol) = spec.tolerance {
        summary.checks.push(Check {
            name: "sharp decay constant".into(),
            pass: relative <= tol,
            detail: format!("fitted c2 = {:.6}, sigma_{} = {sigma:.6}, relative error {relative:.3e}", fit.c2, scenario.m),
        });
    }
    Ok(BoundRow {
        bound: spec.bound.name(),
        fitted_c2: Some(fit.c2),
        fitted_c1: None,
        k: 0.0,
        samples: fit.points.len(),
        max_ratio: fit.c2 / sigma,
        window: [lo, hi],
    })
}

impl Scenario {
    fn domain_dimension(&self) -> usize {
        match self.domain {
            heatbound_core::Shape::Interval { .. } => 1,
            _ => 2,
        }
    }
}
