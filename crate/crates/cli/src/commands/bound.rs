use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Subcommand};
use nilspec_core::group::GroupId;
use nilspec_core::multiplier::{
    end_to_end_bound, heat_decay, sobolev_check, sup_bound, trace_exponent, CustomPhi, EndToEnd, ExponentPair,
    HeatDecay, PhiFunction, SobolevCheck, SupBound,
};
use serde::Serialize;

use super::trace::{sweep, DEFAULT_GRID};
use crate::config::{parse_number, parse_s_grid, Overrides};
use crate::output::Sink;
use crate::{GroupFlag, Status};

/// Agreement required between the numerical supremum and its closed form.
pub const SUP_TOLERANCE: f64 = 1e-6;

pub const BOUND_NOTE: &str = "values are upper bounds up to the unspecified constant of the multiplier theorem";

#[derive(Args, Debug)]
pub struct BoundArgs {
    #[command(subcommand)]
    pub kind: BoundKind,
}

#[derive(Subcommand, Debug)]
pub enum BoundKind {
    /// Heat-semigroup decay sup_s e^{-ts} s^{e/r} = C t^{-beta}.
    Heat(HeatArgs),
    /// Sobolev-type condition a - b >= e/r.
    Sobolev(SobolevArgs),
    /// sup_s phi(s) s^{e/r} for a multiplier profile phi.
    Phi(PhiArgs),
    /// Multiplier bound with the trace growth fitted from a dual sweep.
    E2e(E2eArgs),
}

#[derive(Args, Debug)]
pub struct PairArgs {
    #[command(flatten)]
    pub group: GroupFlag,
    /// Source exponent p in (1, 2]; fractions like 4/3 are exact.
    #[arg(short = 'p', value_parser = parse_number)]
    pub p: f64,
    /// Target exponent q in [2, inf).
    #[arg(short = 'q', value_parser = parse_number)]
    pub q: f64,
}

impl PairArgs {
    fn pair(&self) -> Result<ExponentPair> {
        Ok(ExponentPair::new(self.p, self.q)?)
    }
}

#[derive(Args, Debug)]
pub struct HeatArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    /// Times, comma separated.
    #[arg(short = 't', value_parser = parse_number, value_delimiter = ',', default_value = "1")]
    pub t: Vec<f64>,
}

#[derive(Args, Debug)]
pub struct SobolevArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    /// Smoothness order a of the source space.
    #[arg(short = 'a', value_parser = parse_number)]
    pub a: f64,
    /// Smoothness order b of the target space.
    #[arg(short = 'b', value_parser = parse_number, default_value = "0")]
    pub b: f64,
}

#[derive(Args, Debug)]
#[group(id = "profile", required = true, multiple = false)]
pub struct ProfileArgs {
    /// phi(s) = (1 + s)^{-A}.
    #[arg(long, value_parser = parse_number, group = "profile")]
    pub power: Option<f64>,
    /// phi(s) = e^{-T s}.
    #[arg(long, value_parser = parse_number, group = "profile")]
    pub heat: Option<f64>,
    /// CSV table with columns s,phi.
    #[arg(long, group = "profile")]
    pub table: Option<PathBuf>,
}

impl ProfileArgs {
    fn phi(&self) -> Result<PhiFunction> {
        Ok(match (self.power, self.heat, &self.table) {
            (Some(a), _, _) => PhiFunction::power(a)?,
            (_, Some(t), _) => PhiFunction::heat(t)?,
            (_, _, Some(path)) => read_table(path)?,
            _ => bail!("one of --power, --heat or --table is required"),
        })
    }
}

#[derive(Args, Debug)]
pub struct PhiArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    #[command(flatten)]
    pub profile: ProfileArgs,
}

#[derive(Args, Debug)]
pub struct E2eArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    #[command(flatten)]
    pub profile: ProfileArgs,
    /// Thresholds of the trace sweep.
    #[arg(long)]
    pub s: Option<String>,
    /// Trace method for the sweep: volume or eigen.
    #[arg(long)]
    pub method: Option<String>,
    /// Quadrature nodes per dual axis.
    #[arg(long, value_delimiter = ',')]
    pub nodes: Option<Vec<usize>>,
}

impl BoundArgs {
    pub fn group(&self) -> Option<GroupId> {
        let flag = match &self.kind {
            BoundKind::Heat(a) => a.pair.group,
            BoundKind::Sobolev(a) => a.pair.group,
            BoundKind::Phi(a) => a.pair.group,
            BoundKind::E2e(a) => a.pair.group,
        };
        flag.group()
    }

    pub fn fill_overrides(&self, o: &mut Overrides) {
        if let BoundKind::E2e(a) = &self.kind {
            o.s_grid = a.s.clone();
            o.method = a.method.clone();
            o.nodes = a.nodes.clone();
        }
    }
}

/// Two-column CSV `s,phi`; a non-numeric first line is taken as a header.
fn read_table(path: &Path) -> Result<PhiFunction> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let (mut s, mut v) = (Vec::new(), Vec::new());
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed = match cols[..] {
            [a, b] => parse_number(a).and_then(|a| parse_number(b).map(|b| (a, b))),
            _ => Err(format!("expected two columns, got {}", cols.len())),
        };
        match parsed {
            Ok((a, b)) => {
                s.push(a);
                v.push(b);
            }
            Err(_) if s.is_empty() && k == 0 => continue,
            Err(e) => bail!("{}:{}: {e}", path.display(), k + 1),
        }
    }
    Ok(PhiFunction::Custom(CustomPhi::new(s, v)?))
}

#[derive(Debug, Serialize)]
struct HeatRow {
    t: f64,
    #[serde(flatten)]
    decay: HeatDecay,
}

#[derive(Debug, Serialize)]
struct HeatReport {
    group: GroupId,
    pair: ExponentPair,
    rows: Vec<HeatRow>,
    pass: bool,
    note: &'static str,
}

#[derive(Debug, Serialize)]
struct SobolevReport {
    group: GroupId,
    pair: ExponentPair,
    a: f64,
    b: f64,
    required: f64,
    #[serde(flatten)]
    check: SobolevCheck,
    pass: bool,
}

#[derive(Debug, Serialize)]
struct PhiReport {
    #[serde(flatten)]
    bound: SupBound,
    exponent: f64,
    pass: bool,
    note: &'static str,
}

#[derive(Debug, Serialize)]
struct E2eReport {
    group: GroupId,
    pair: ExponentPair,
    phi: String,
    slope: f64,
    intercept: f64,
    #[serde(flatten)]
    bound: EndToEnd,
    pass: bool,
    note: &'static str,
}

fn status(pass: bool) -> Status {
    if pass {
        Status::Pass
    } else {
        Status::Fail
    }
}

pub fn run(args: &BoundArgs, sink: &Sink) -> Result<Status> {
    let group = sink.config().group;
    match &args.kind {
        BoundKind::Heat(a) => {
            let pair = a.pair.pair()?;
            let rows =
                a.t.iter()
                    .map(|&t| Ok(HeatRow { t, decay: heat_decay(group, &pair, t)? }))
                    .collect::<Result<Vec<_>>>()?;
            let pass = rows.iter().all(|r| r.decay.rel_err <= SUP_TOLERANCE);
            sink.json(&HeatReport { group, pair, rows, pass, note: BOUND_NOTE })?;
            Ok(status(pass))
        }
        BoundKind::Sobolev(a) => {
            let pair = a.pair.pair()?;
            let check = sobolev_check(group, a.a, a.b, &pair);
            let required = trace_exponent(group) * pair.inv_r();
            sink.json(&SobolevReport { group, pair, a: a.a, b: a.b, required, check, pass: check.holds })?;
            Ok(status(check.holds))
        }
        BoundKind::Phi(a) => {
            let pair = a.pair.pair()?;
            let bound = sup_bound(&a.profile.phi()?, group, &pair);
            let pass = bound.finite && bound.rel_err.is_none_or(|e| e <= SUP_TOLERANCE);
            let exponent = trace_exponent(group) * pair.inv_r();
            sink.json(&PhiReport { bound, exponent, pass, note: BOUND_NOTE })?;
            Ok(status(pass))
        }
        BoundKind::E2e(a) => {
            let pair = a.pair.pair()?;
            let phi = a.profile.phi()?;
            let cfg = sink.config();
            let grid = match &cfg.s_grid {
                Some(g) => g.clone(),
                None => parse_s_grid(DEFAULT_GRID)?,
            };
            let fit = sweep(cfg, &grid, cfg.method)?.fit;
            let bound = end_to_end_bound(&phi, &pair, Some(&fit)).map_err(|e| anyhow!(e))?;
            let report = E2eReport {
                group,
                pair,
                phi: phi.describe(),
                slope: fit.slope,
                intercept: fit.intercept,
                pass: bound.finite,
                bound,
                note: BOUND_NOTE,
            };
            sink.json(&report)?;
            Ok(status(report.pass))
        }
    }
}
