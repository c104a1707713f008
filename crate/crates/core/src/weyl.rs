//! Phase-space volumes of `{(u, ξ) : a·ξ² + V(u) < s}` and their
//! comparison with eigenvalue counts.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fit::least_squares;
use crate::group::GroupId;
use crate::quadrature::adaptive;
use crate::representation::DualPoint;
use crate::schrodinger::{count_below, Potential, SchrodingerOp, SpectralConfig};

/// Relative accuracy requested from the volume quadrature.
pub const VOLUME_TOL: f64 = 1e-10;

const SCAN_SAMPLES: usize = 4096;

/// Classical symbol `σ(u, ξ) = a·ξ² + V(u)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeylSymbol {
    pub kinetic: f64,
    pub potential: Potential,
}

impl From<&SchrodingerOp> for WeylSymbol {
    fn from(op: &SchrodingerOp) -> Self {
        Self { kinetic: op.kinetic(), potential: op.potential().clone() }
    }
}

/// Open interval `(lo, hi)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

fn bisect_crossing(v: &Potential, s: f64, mut a: f64, mut b: f64) -> f64 {
    let inside_a = v.eval(a) < s;
    while b - a > 1e-12 * a.abs().max(b.abs()).max(f64::MIN_POSITIVE) {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if (v.eval(m) < s) == inside_a {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// `{u : V(u) < s}` as disjoint open intervals in ascending order.
pub fn sublevel_intervals(v: &Potential, s: f64) -> Vec<Interval> {
    if !s.is_finite() || s <= v.minimum().1 {
        return Vec::new();
    }
    let radius = v.level_radius(s);
    let du = radius / SCAN_SAMPLES as f64;
    // crossings on u ≥ 0; by evenness the rest is a mirror image
    let mut inside = v.eval(0.0) < s;
    let mut start = if inside { Some(0.0) } else { None };
    let mut half: Vec<Interval> = Vec::new();
    for k in 1..=SCAN_SAMPLES {
        let u = k as f64 * du;
        let now = v.eval(u) < s;
        if now != inside {
            let x = bisect_crossing(v, s, u - du, u);
            match start.take() {
                Some(lo) => half.push(Interval { lo, hi: x }),
                None => start = Some(x),
            }
            inside = now;
        }
    }
    if let Some(lo) = start {
        half.push(Interval { lo, hi: bisect_crossing(v, s, lo, radius) });
    }
    let mut out: Vec<Interval> = Vec::with_capacity(2 * half.len());
    for iv in half.iter().rev() {
        if iv.lo == 0.0 {
            continue;
        }
        out.push(Interval { lo: -iv.hi, hi: -iv.lo });
    }
    for iv in &half {
        if iv.lo == 0.0 {
            out.push(Interval { lo: -iv.hi, hi: iv.hi });
        } else {
            out.push(*iv);
        }
    }
    out.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    out
}

/// `∫ 2√((s − V)/a) du` over one interval whose endpoints are turning
/// points; each half is integrated in `w` with `u = endpoint ± w²`.
fn interval_volume(sym: &WeylSymbol, s: f64, iv: Interval) -> f64 {
    let scale = 2.0 / sym.kinetic.sqrt();
    let g = |u: f64| (s - sym.potential.eval(u)).max(0.0).sqrt();
    let mid = 0.5 * (iv.lo + iv.hi);
    let half = (mid - iv.lo).sqrt();
    let left = adaptive(|w| 2.0 * w * g(iv.lo + w * w), 0.0, half, VOLUME_TOL);
    let right = adaptive(|w| 2.0 * w * g(iv.hi - w * w), 0.0, half, VOLUME_TOL);
    scale * (left.value + right.value)
}

/// Area of `{a·ξ² + V(u) < s}`.
pub fn phase_space_volume(sym: &WeylSymbol, s: f64) -> f64 {
    sublevel_intervals(&sym.potential, s).into_iter().map(|iv| interval_volume(sym, s, iv)).sum()
}

/// `2π·N(s)/volume(s)`; tends to 1 as `s → ∞` for every confining
/// potential.
pub fn weyl_ratio(op: &SchrodingerOp, s: f64, cfg: &SpectralConfig) -> Result<f64> {
    let vol = phase_space_volume(&WeylSymbol::from(op), s);
    if vol <= 0.0 {
        return Err(Error::InvalidArgument(format!("threshold {s} is not above the bottom of the potential")));
    }
    let n = count_below(op, s, cfg)?;
    Ok(2.0 * std::f64::consts::PI * n as f64 / vol)
}

/// Growth exponent `e` in the per-point bound `N(s) ≲ C·s^e`.
pub fn counting_exponent(group: GroupId) -> f64 {
    match group {
        GroupId::Engel => 1.5,
        GroupId::Cartan => 2.5,
    }
}

/// One threshold of a [`CountingBoundReport`], taken at the dual point
/// where `N(s)/s^e` is largest.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountingRow {
    pub s: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub volume: f64,
    pub ratio: f64,
    pub point: Option<DualPoint>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountingBoundReport {
    pub group: GroupId,
    pub exponent: f64,
    pub rows: Vec<CountingRow>,
    /// `max N(s)/s^e` over every sampled point and threshold.
    pub empirical_constant: f64,
    /// Least-squares slope of `ln ratio` against `ln s` (0 when some ratio
    /// vanishes).
    pub trend_slope: f64,
    /// Ratios are finite and the trend does not increase.
    pub bounded: bool,
}

/// Slack on the fitted trend before the ratio sequence counts as growing.
pub const TREND_TOLERANCE: f64 = 0.05;

/// `max_points N(s; point)/s^e` over a grid of thresholds.
pub fn counting_bound_check(
    group: GroupId,
    points: &[DualPoint],
    s_grid: &[f64],
    cfg: &SpectralConfig,
) -> Result<CountingBoundReport> {
    if let Some(p) = points.iter().find(|p| p.group != group) {
        return Err(Error::GroupMismatch { left: group, right: p.group });
    }
    let exponent = counting_exponent(group);
    let mut rows = Vec::with_capacity(s_grid.len());
    for &s in s_grid {
        let per_point: Vec<(usize, &DualPoint)> = points
            .par_iter()
            .map(|p| {
                let op = SchrodingerOp::for_dual_point(p)?;
                count_below(&op, s, cfg)
                    .map(|n| (n, p))
                    .map_err(|e| Error::AtDualPoint { point: format!("{p:?}"), source: Box::new(e) })
            })
            .collect::<Result<_>>()?;
        // first maximiser in input order, independent of scheduling
        let best = per_point.iter().fold(None::<(usize, &DualPoint)>, |acc, &(n, p)| match acc {
            Some((m, _)) if m >= n => acc,
            _ => Some((n, p)),
        });
        let row = match best {
            Some((n, p)) if n > 0 => {
                let op = SchrodingerOp::for_dual_point(p)?;
                CountingRow {
                    s,
                    n,
                    volume: phase_space_volume(&WeylSymbol::from(&op), s),
                    ratio: n as f64 / s.powf(exponent),
                    point: Some(*p),
                }
            }
            _ => CountingRow { s, n: 0, volume: 0.0, ratio: 0.0, point: None },
        };
        rows.push(row);
    }
    let empirical_constant = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let trend_slope = if rows.len() >= 2 && rows.iter().all(|r| r.ratio > 0.0) {
        let xs: Vec<f64> = rows.iter().map(|r| r.s.ln()).collect();
        let ys: Vec<f64> = rows.iter().map(|r| r.ratio.ln()).collect();
        least_squares(&xs, &ys).0
    } else {
        0.0
    };
    let bounded = empirical_constant.is_finite() && trend_slope <= TREND_TOLERANCE;
    Ok(CountingBoundReport { group, exponent, rows, empirical_constant, trend_slope, bounded })
}
