//! Trace of the spectral projection `E_(0,s)` as an integral over the
//! truncated dual region of per-representation counts, and its growth rate.
//!
//! The dual measure is plain Lebesgue measure `dλ dμ` (Engel) or
//! `dλ dμ dν` (Cartan); no Plancherel density is included.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::GrowthFit;
use crate::group::GroupId;
use crate::quadrature::GaussLegendre;
use crate::representation::DualPoint;
use crate::schrodinger::{count_below, SchrodingerOp, SpectralConfig};
use crate::weyl::{phase_space_volume, WeylSymbol};

/// Truncated dual region `{λ ∈ (s^{−1/2}, s^{1/2}), …}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualRegion {
    pub group: GroupId,
    pub s: f64,
    pub lambda: (f64, f64),
    pub mu: (f64, f64),
    /// Cartan only.
    pub nu: Option<(f64, f64)>,
}

/// Engel: `λ ∈ (s^{−1/2}, s^{1/2})`, `μ ∈ (−2s, 4s)`.
/// Cartan: `λ, μ ∈ (s^{−1/2}, s^{1/2})`, `ν ∈ (−2s, 2s)`.
pub fn region_for(group: GroupId, s: f64) -> Result<DualRegion> {
    if !(s > 1.0 && s.is_finite()) {
        return Err(Error::InvalidRegion(s));
    }
    let lambda = (1.0 / s.sqrt(), s.sqrt());
    Ok(match group {
        GroupId::Engel => DualRegion { group, s, lambda, mu: (-2.0 * s, 4.0 * s), nu: None },
        GroupId::Cartan => DualRegion { group, s, lambda, mu: lambda, nu: Some((-2.0 * s, 2.0 * s)) },
    })
}

impl DualRegion {
    /// Integration axes in the order `λ, μ[, ν]`.
    pub fn axes(&self) -> Vec<(f64, f64)> {
        let mut out = vec![self.lambda, self.mu];
        out.extend(self.nu);
        out
    }

    /// Lebesgue measure of the region.
    pub fn measure(&self) -> f64 {
        self.axes().iter().map(|(a, b)| b - a).product()
    }

    fn point(&self, x: &[f64]) -> Result<DualPoint> {
        DualPoint::new(self.group, x[0], x[1], x.get(2).copied().unwrap_or(0.0))
    }
}

/// Per-point value integrated over the region.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceMethod {
    /// Sturm count `N(s)` of the operator symbol.
    EigenCount,
    /// `volume/(2π)` of the classical sub-level set.
    VolumeBound,
}

impl TraceMethod {
    pub fn name(self) -> &'static str {
        match self {
            TraceMethod::EigenCount => "eigen_count",
            TraceMethod::VolumeBound => "volume_bound",
        }
    }
}

impl std::str::FromStr for TraceMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eigen_count" => Ok(TraceMethod::EigenCount),
            "volume_bound" => Ok(TraceMethod::VolumeBound),
            other => Err(Error::InvalidArgument(format!("unknown method {other:?}; use eigen_count or volume_bound"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisRule {
    Midpoint,
    GaussLegendre,
}

/// Tensor-product rule: one node count per axis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rule: AxisRule,
    pub nodes: Vec<usize>,
}

impl QuadratureSpec {
    pub fn gauss(nodes: Vec<usize>) -> Self {
        Self { rule: AxisRule::GaussLegendre, nodes }
    }

    pub fn midpoint(nodes: Vec<usize>) -> Self {
        Self { rule: AxisRule::Midpoint, nodes }
    }

    /// Same rule with every node count doubled.
    pub fn doubled(&self) -> Self {
        Self { rule: self.rule, nodes: self.nodes.iter().map(|n| 2 * n).collect() }
    }

    fn halved(&self) -> Self {
        Self { rule: self.rule, nodes: self.nodes.iter().map(|n| n.div_ceil(2)).collect() }
    }

    fn axis(&self, n: usize, (a, b): (f64, f64)) -> (Vec<f64>, Vec<f64>) {
        match self.rule {
            AxisRule::GaussLegendre => GaussLegendre::new(n).on(a, b),
            AxisRule::Midpoint => {
                let h = (b - a) / n as f64;
                ((0..n).map(|k| a + (k as f64 + 0.5) * h).collect(), vec![h; n])
            }
        }
    }
}

/// Integral over the region with an error indicator.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceEstimate {
    pub s: f64,
    pub value: f64,
    pub method: TraceMethod,
    pub nodes: Vec<usize>,
    /// `|Q_n − Q_{n/2}|` with every node count halved.
    pub error: f64,
}

/// Sum in a fixed binary-tree order, independent of how the terms were
/// produced.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n => pairwise_sum(&xs[..n / 2]) + pairwise_sum(&xs[n / 2..]),
    }
}

/// Tensor-product quadrature of `f` over `region`. Nodes are evaluated in
/// parallel and reduced in a fixed order.
pub fn integrate_region<F>(region: &DualRegion, spec: &QuadratureSpec, f: F) -> Result<f64>
where
    F: Fn(&DualPoint) -> Result<f64> + Sync,
{
    let axes = region.axes();
    if spec.nodes.len() != axes.len() || spec.nodes.contains(&0) {
        return Err(Error::InvalidArgument(format!(
            "{} region needs {} positive node counts, got {:?}",
            region.group,
            axes.len(),
            spec.nodes
        )));
    }
    let rules: Vec<(Vec<f64>, Vec<f64>)> = spec.nodes.iter().zip(&axes).map(|(&n, &ab)| spec.axis(n, ab)).collect();
    let total: usize = spec.nodes.iter().product();
    let terms: Vec<f64> = (0..total)
        .into_par_iter()
        .map(|mut idx| {
            let mut x = [0.0; 3];
            let mut w = 1.0;
            for (k, (nodes, weights)) in rules.iter().enumerate().rev() {
                let j = idx % nodes.len();
                idx /= nodes.len();
                x[k] = nodes[j];
                w *= weights[j];
            }
            let p = region.point(&x[..axes.len()])?;
            f(&p).map(|v| w * v).map_err(|e| Error::AtDualPoint { point: format!("{p:?}"), source: Box::new(e) })
        })
        .collect::<Result<_>>()?;
    Ok(pairwise_sum(&terms))
}

/// Per-point counting value of `method` at threshold `s`.
pub fn point_value(p: &DualPoint, s: f64, method: TraceMethod, cfg: &SpectralConfig) -> Result<f64> {
    let op = SchrodingerOp::for_dual_point(p)?;
    match method {
        TraceMethod::EigenCount => Ok(count_below(&op, s, cfg)? as f64),
        TraceMethod::VolumeBound => Ok(phase_space_volume(&WeylSymbol::from(&op), s) / (2.0 * std::f64::consts::PI)),
    }
}

/// `∫_region N(s; π) dπ` (or its volume bound).
pub fn trace_estimate(
    group: GroupId,
    s: f64,
    method: TraceMethod,
    spec: &QuadratureSpec,
    cfg: &SpectralConfig,
) -> Result<TraceEstimate> {
    trace_estimate_with(group, s, method, spec, |p| point_value(p, s, method, cfg))
}

/// [`trace_estimate`] with a caller-supplied per-point integrand.
pub fn trace_estimate_with<F>(
    group: GroupId,
    s: f64,
    method: TraceMethod,
    spec: &QuadratureSpec,
    f: F,
) -> Result<TraceEstimate>
where
    F: Fn(&DualPoint) -> Result<f64> + Sync,
{
    let region = region_for(group, s)?;
    let value = integrate_region(&region, spec, &f)?;
    let coarse = integrate_region(&region, &spec.halved(), &f)?;
    Ok(TraceEstimate { s, value, method, nodes: spec.nodes.clone(), error: (value - coarse).abs() })
}

/// Exponent the paper's bound allows: `τ ≲ s^3` (Engel), `s^{9/2}` (Cartan).
pub fn target_exponent(group: GroupId) -> f64 {
    match group {
        GroupId::Engel => 3.0,
        GroupId::Cartan => 4.5,
    }
}

/// Slack added to the target exponent when judging a fitted slope.
pub const SLOPE_TOLERANCE: f64 = 0.3;

/// Trace estimates along `s_grid` and their log–log fit.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthSweep {
    pub group: GroupId,
    pub method: TraceMethod,
    pub estimates: Vec<TraceEstimate>,
    pub fit: GrowthFit,
}

/// JSON-facing summary of a [`GrowthSweep`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitReport {
    pub slope: f64,
    pub intercept: f64,
    pub residual: f64,
    pub target: f64,
    pub pass: bool,
    pub assumption: &'static str,
}

pub const MEASURE_ASSUMPTION: &str =
    "dual measure taken as Lebesgue measure on the truncated positive-lambda region; Plancherel density treated as an absolute constant";

impl GrowthSweep {
    pub fn report(&self) -> FitReport {
        let target = target_exponent(self.group);
        FitReport {
            slope: self.fit.slope,
            intercept: self.fit.intercept,
            residual: self.fit.residual,
            target,
            pass: self.fit.slope <= target + SLOPE_TOLERANCE,
            assumption: MEASURE_ASSUMPTION,
        }
    }

    /// Every estimate is at least the previous one.
    pub fn is_monotone(&self) -> bool {
        self.estimates.windows(2).all(|w| w[1].value >= w[0].value)
    }
}

fn check_s_grid(s_grid: &[f64]) -> Result<()> {
    if s_grid.len() < 2 || s_grid.windows(2).any(|w| !(w[1] > w[0])) || s_grid[0] <= 1.0 {
        return Err(Error::InvalidSGrid("need an increasing grid of at least 2 thresholds above 1".into()));
    }
    Ok(())
}

pub fn growth_exponent(
    group: GroupId,
    s_grid: &[f64],
    method: TraceMethod,
    spec: &QuadratureSpec,
    cfg: &SpectralConfig,
) -> Result<GrowthSweep> {
    growth_exponent_with(group, s_grid, method, spec, |p, s| point_value(p, s, method, cfg))
}

/// [`growth_exponent`] with a caller-supplied integrand `f(point, s)`.
pub fn growth_exponent_with<F>(
    group: GroupId,
    s_grid: &[f64],
    method: TraceMethod,
    spec: &QuadratureSpec,
    f: F,
) -> Result<GrowthSweep>
where
    F: Fn(&DualPoint, f64) -> Result<f64> + Sync,
{
    check_s_grid(s_grid)?;
    let estimates =
        s_grid.iter().map(|&s| trace_estimate_with(group, s, method, spec, |p| f(p, s))).collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = estimates.iter().map(|e| e.value).collect();
    let fit = GrowthFit::fit(s_grid, &values)?;
    Ok(GrowthSweep { group, method, estimates, fit })
}

/// Both methods on the same nodes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossValidation {
    pub s: f64,
    pub eigen_count: TraceEstimate,
    pub volume_bound: TraceEstimate,
    /// `|eigen − volume| / volume`.
    pub relative_gap: f64,
    pub pass: bool,
}

/// Largest relative gap accepted between the two methods.
pub const CROSS_VALIDATION_TOLERANCE: f64 = 0.25;

pub fn cross_validate(group: GroupId, s: f64, spec: &QuadratureSpec, cfg: &SpectralConfig) -> Result<CrossValidation> {
    let eigen_count = trace_estimate(group, s, TraceMethod::EigenCount, spec, cfg)?;
    let volume_bound = trace_estimate(group, s, TraceMethod::VolumeBound, spec, cfg)?;
    let diff = (eigen_count.value - volume_bound.value).abs();
    let relative_gap = if diff == 0.0 { 0.0 } else { diff / volume_bound.value.abs() };
    Ok(CrossValidation { s, eigen_count, volume_bound, relative_gap, pass: relative_gap <= CROSS_VALIDATION_TOLERANCE })
}

/// `s,estimate,method,nodes` rows; node counts joined with `x`.
pub fn write_sweep_csv<W: Write>(estimates: &[TraceEstimate], mut out: W) -> io::Result<()> {
    writeln!(out, "s,estimate,method,nodes")?;
    for e in estimates {
        let nodes: Vec<String> = e.nodes.iter().map(|n| n.to_string()).collect();
        writeln!(out, "{:.17e},{:.17e},{},{}", e.s, e.value, e.method.name(), nodes.join("x"))?;
    }
    Ok(())
}
