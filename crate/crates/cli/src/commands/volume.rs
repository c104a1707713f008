use anyhow::Result;
use clap::Args;
use nilspec_core::schrodinger::count_below;
use nilspec_core::weyl::{phase_space_volume, sublevel_intervals, Interval, WeylSymbol};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{OperatorInfo, PointArgs};
use crate::config::parse_number;
use crate::output::Sink;
use crate::Status;

/// Monte Carlo agreement is required within this many standard errors.
pub const MC_SIGMAS: f64 = 4.0;

#[derive(Args, Debug)]
pub struct VolumeArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// Threshold s of the sublevel set {a ξ² + V(u) < s}.
    #[arg(short = 's', long, value_parser = parse_number)]
    pub s: f64,
    /// Cross-check the area by Monte Carlo with this many samples (uses --seed).
    #[arg(long)]
    pub mc_samples: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct MonteCarlo {
    pub samples: usize,
    pub seed: u64,
    pub estimate: f64,
    pub std_error: f64,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct VolumeReport {
    pub operator: OperatorInfo,
    pub s: f64,
    pub intervals: Vec<Interval>,
    pub volume: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub weyl_ratio: Option<f64>,
    pub monte_carlo: Option<MonteCarlo>,
}

/// Hit-or-miss estimate of the area over the bounding box of the sublevel set.
fn monte_carlo(sym: &WeylSymbol, s: f64, intervals: &[Interval], samples: usize, seed: u64) -> (f64, f64) {
    let (Some(first), Some(last)) = (intervals.first(), intervals.last()) else {
        return (0.0, 0.0);
    };
    let (u_lo, u_hi) = (first.lo, last.hi);
    let xi_max = (s.max(0.0) / sym.kinetic).sqrt();
    let area = (u_hi - u_lo) * 2.0 * xi_max;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hits = (0..samples)
        .filter(|_| {
            let u: f64 = rng.gen_range(u_lo..u_hi);
            let xi: f64 = rng.gen_range(-xi_max..xi_max);
            sym.kinetic * xi * xi + sym.potential.eval(u) < s
        })
        .count();
    let p = hits as f64 / samples as f64;
    (p * area, area * (p * (1.0 - p) / samples as f64).sqrt())
}

pub fn run(args: &VolumeArgs, sink: &Sink) -> Result<Status> {
    let cfg = sink.config();
    let (op, operator) = args.point.build(cfg.group)?;
    let s = operator.threshold_scale * args.s;
    let sym = WeylSymbol::from(&op);
    let intervals = sublevel_intervals(&sym.potential, s);
    let volume = phase_space_volume(&sym, s);
    let n = count_below(&op, s, &cfg.spectral)?;
    let weyl_ratio = (volume > 0.0).then(|| 2.0 * std::f64::consts::PI * n as f64 / volume);
    let monte_carlo = args.mc_samples.filter(|&m| m > 0).map(|samples| {
        let (estimate, std_error) = monte_carlo(&sym, s, &intervals, samples, cfg.seed);
        let pass = (estimate - volume).abs() <= MC_SIGMAS * std_error + 1e-12 * volume;
        MonteCarlo { samples, seed: cfg.seed, estimate, std_error, pass }
    });
    let pass = monte_carlo.as_ref().is_none_or(|m| m.pass);
    sink.json(&VolumeReport { operator, s: args.s, intervals, volume, n, weyl_ratio, monte_carlo })?;
    Ok(if pass { Status::Pass } else { Status::Fail })
}
