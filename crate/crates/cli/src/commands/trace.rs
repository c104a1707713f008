use std::io::Write;

use anyhow::{bail, Result};
use clap::Args;
use nilspec_core::dual_trace::{
    cross_validate, growth_exponent, region_for, write_sweep_csv, CrossValidation, DualRegion, FitReport, GrowthSweep,
    QuadratureSpec, TraceEstimate, TraceMethod,
};
use serde::Serialize;

use crate::config::{parse_s_grid, RunConfig};
use crate::output::Sink;
use crate::{GroupFlag, Status};

pub const DEFAULT_GRID: &str = "1e2:1e4:5";

#[derive(Args, Debug)]
pub struct TraceArgs {
    #[command(flatten)]
    pub group: GroupFlag,
    /// Thresholds as start:end:count (geometric) or a comma list; all > 1.
    #[arg(long)]
    pub s: Option<String>,
    /// volume (phase-space volume / 2π) or eigen (Sturm counts).
    #[arg(long)]
    pub method: Option<String>,
    /// Quadrature nodes per dual axis, e.g. 32,32 or 16,16,16.
    #[arg(long, value_delimiter = ',')]
    pub nodes: Option<Vec<usize>>,
    /// Per-axis rule: gauss or midpoint.
    #[arg(long)]
    pub rule: Option<String>,
    /// Emit the sweep as CSV instead of the JSON fit report.
    #[arg(long)]
    pub csv: bool,
    /// Compare both methods at the first, middle and last threshold.
    #[arg(long)]
    pub cross_validate: bool,
}

#[derive(Debug, Serialize)]
pub struct TraceReport {
    pub group: nilspec_core::GroupId,
    pub method: TraceMethod,
    pub quadrature: QuadratureSpec,
    pub regions: Vec<DualRegion>,
    pub estimates: Vec<TraceEstimate>,
    pub fit: FitReport,
    pub monotone: bool,
    pub cross_validation: Option<Vec<CrossValidation>>,
    pub pass: bool,
}

/// First, middle and last entries of the grid.
pub fn thinned(grid: &[f64]) -> Vec<f64> {
    let mut idx = vec![0, grid.len() / 2, grid.len() - 1];
    idx.dedup();
    idx.into_iter().map(|i| grid[i]).collect()
}

pub fn sweep(cfg: &RunConfig, grid: &[f64], method: TraceMethod) -> Result<GrowthSweep> {
    if grid.len() < 2 {
        bail!("a growth fit needs at least two thresholds");
    }
    for &s in grid {
        region_for(cfg.group, s)?;
    }
    Ok(growth_exponent(cfg.group, grid, method, &cfg.quadrature, &cfg.spectral)?)
}

pub fn cross_validation(cfg: &RunConfig, grid: &[f64]) -> Result<Vec<CrossValidation>> {
    thinned(grid).into_iter().map(|s| Ok(cross_validate(cfg.group, s, &cfg.quadrature, &cfg.spectral)?)).collect()
}

pub fn run(args: &TraceArgs, sink: &Sink) -> Result<Status> {
    let cfg = sink.config();
    let grid = match &cfg.s_grid {
        Some(g) => g.clone(),
        None => parse_s_grid(DEFAULT_GRID)?,
    };
    let sweep = sweep(cfg, &grid, cfg.method)?;
    if args.csv {
        sink.text(|out: &mut dyn Write| write_sweep_csv(&sweep.estimates, out))?;
        return Ok(Status::Pass);
    }
    let cv = if args.cross_validate { Some(cross_validation(cfg, &grid)?) } else { None };
    let fit = sweep.report();
    let pass = fit.pass && cv.as_ref().is_none_or(|c| c.iter().all(|c| c.pass));
    let regions = grid.iter().map(|&s| region_for(cfg.group, s)).collect::<nilspec_core::Result<_>>()?;
    let report = TraceReport {
        group: cfg.group,
        method: cfg.method,
        quadrature: cfg.quadrature.clone(),
        regions,
        monotone: sweep.is_monotone(),
        estimates: sweep.estimates,
        fit,
        cross_validation: cv,
        pass,
    };
    sink.json(&report)?;
    Ok(if pass { Status::Pass } else { Status::Fail })
}
