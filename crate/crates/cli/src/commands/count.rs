use anyhow::Result;
use clap::Args;
use nilspec_core::fit::GrowthFit;
use nilspec_core::schrodinger::count_below;
use nilspec_core::weyl::{counting_exponent, phase_space_volume, WeylSymbol};
use rayon::prelude::*;
use serde::Serialize;

use super::{OperatorInfo, PointArgs};
use crate::config::parse_s_grid;
use crate::output::Sink;
use crate::Status;

/// Allowed excess of the fitted slope of N(s) over the counting exponent.
pub const SLOPE_SLACK: f64 = 0.2;

pub const DEFAULT_GRID: &str = "1e2:1e4:5";

#[derive(Args, Debug)]
pub struct CountArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// Thresholds as start:end:count (geometric) or a comma list.
    #[arg(long)]
    pub s: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct CountRow {
    pub s: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub volume: f64,
    pub weyl_ratio: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct CountReport {
    pub operator: OperatorInfo,
    pub rows: Vec<CountRow>,
    pub slope: Option<f64>,
    pub limit: f64,
    pub pass: bool,
}

/// `N(s)` for the selected operator. For a rescaled Cartan symbol the count
/// of the original symbol is reported through `N_B(s) = N_{ρB}(ρs)`.
pub fn count_rows(args: &PointArgs, sink: &Sink, grid: &[f64]) -> Result<(OperatorInfo, Vec<CountRow>)> {
    let cfg = sink.config();
    let (op, info) = args.build(cfg.group)?;
    let sym = WeylSymbol::from(&op);
    let scale = info.threshold_scale;
    let rows = grid
        .par_iter()
        .map(|&s| {
            let n = count_below(&op, scale * s, &cfg.spectral)?;
            let volume = phase_space_volume(&sym, scale * s);
            let weyl_ratio = (volume > 0.0).then(|| 2.0 * std::f64::consts::PI * n as f64 / volume);
            Ok(CountRow { s, n, volume, weyl_ratio })
        })
        .collect::<nilspec_core::Result<Vec<_>>>()?;
    Ok((info, rows))
}

pub fn run(args: &CountArgs, sink: &Sink) -> Result<Status> {
    let cfg = sink.config();
    let grid = match &cfg.s_grid {
        Some(g) => g.clone(),
        None => parse_s_grid(DEFAULT_GRID)?,
    };
    let (operator, rows) = count_rows(&args.point, sink, &grid)?;
    let limit = if args.point.harmonic { 1.0 } else { counting_exponent(cfg.group) } + SLOPE_SLACK;
    let positive: Vec<&CountRow> = rows.iter().filter(|r| r.n > 0).collect();
    let slope = if positive.len() >= 2 {
        let s: Vec<f64> = positive.iter().map(|r| r.s).collect();
        let n: Vec<f64> = positive.iter().map(|r| r.n as f64).collect();
        Some(GrowthFit::fit(&s, &n)?.slope)
    } else {
        None
    };
    let pass = slope.is_some_and(|m| m <= limit);
    sink.json(&CountReport { operator, rows, slope, limit, pass })?;
    Ok(if pass { Status::Pass } else { Status::Fail })
}
