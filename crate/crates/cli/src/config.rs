//! Effective run configuration: built-in defaults, then command-line flags,
//! then the config file (which wins).

use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use nilspec_core::dual_trace::{AxisRule, QuadratureSpec, TraceMethod};
use nilspec_core::fit::geometric_grid;
use nilspec_core::group::GroupId;
use nilspec_core::representation::EPS_DUAL;
use nilspec_core::schrodinger::SpectralConfig;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

/// Settings that may come from flags or from the config file. Every field
/// is optional so that unset values fall through to the next layer.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub group: Option<GroupId>,
    pub kappa: Option<f64>,
    pub tol: Option<f64>,
    pub points_per_wavelength: Option<f64>,
    pub min_points: Option<usize>,
    pub max_points: Option<usize>,
    pub s_grid: Option<String>,
    pub nodes: Option<Vec<usize>>,
    pub rule: Option<String>,
    pub method: Option<String>,
    pub threads: Option<usize>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
}

impl Overrides {
    /// Fields set in `other` replace the fields of `self`.
    pub fn overlay(mut self, other: Overrides) -> Overrides {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(
            group,
            kappa,
            tol,
            points_per_wavelength,
            min_points,
            max_points,
            s_grid,
            nodes,
            rule,
            method,
            threads,
            seed,
            output
        );
        self
    }

    pub fn from_file(path: &Path) -> Result<Overrides> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
        } else {
            toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
        }
    }
}

/// Fully resolved configuration, echoed in every provenance header.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub group: GroupId,
    pub spectral: SpectralConfig,
    pub eps_dual: f64,
    pub s_grid: Option<Vec<f64>>,
    pub quadrature: QuadratureSpec,
    pub method: TraceMethod,
    pub threads: Option<usize>,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub config_file: Option<PathBuf>,
}

pub fn default_nodes(group: GroupId) -> Vec<usize> {
    match group {
        GroupId::Engel => vec![32, 32],
        GroupId::Cartan => vec![16, 16, 16],
    }
}

impl RunConfig {
    pub fn resolve(o: Overrides, config_file: Option<PathBuf>) -> Result<RunConfig> {
        let group = o.group.unwrap_or(GroupId::Engel);
        let d = SpectralConfig::default();
        let spectral = SpectralConfig {
            kappa: o.kappa.unwrap_or(d.kappa),
            points_per_wavelength: o.points_per_wavelength.unwrap_or(d.points_per_wavelength),
            tol: o.tol.unwrap_or(d.tol),
            min_points: o.min_points.unwrap_or(d.min_points),
            max_points: o.max_points.unwrap_or(d.max_points),
        };
        spectral.validate()?;
        let s_grid = o.s_grid.as_deref().map(parse_s_grid).transpose()?;
        let rule = match o.rule.as_deref().unwrap_or("gauss") {
            "gauss" | "gauss_legendre" => AxisRule::GaussLegendre,
            "midpoint" => AxisRule::Midpoint,
            other => bail!("unknown quadrature rule '{other}' (expected gauss or midpoint)"),
        };
        let nodes = o.nodes.unwrap_or_else(|| default_nodes(group));
        let axes = default_nodes(group).len();
        if nodes.len() != axes || nodes.contains(&0) {
            bail!("{group} quadrature needs {axes} positive node counts, got {nodes:?}");
        }
        let method = parse_method(o.method.as_deref().unwrap_or("volume"))?;
        if o.threads == Some(0) {
            bail!("threads must be positive");
        }
        Ok(RunConfig {
            group,
            spectral,
            eps_dual: EPS_DUAL,
            s_grid,
            quadrature: QuadratureSpec { rule, nodes },
            method,
            threads: o.threads,
            seed: o.seed.unwrap_or(0),
            output: o.output,
            config_file,
        })
    }
}

pub fn parse_method(s: &str) -> Result<TraceMethod> {
    match s {
        "volume" | "volume_bound" => Ok(TraceMethod::VolumeBound),
        "eigen" | "eigen_count" => Ok(TraceMethod::EigenCount),
        other => bail!("unknown trace method '{other}' (expected volume or eigen)"),
    }
}

/// A real number written as a decimal, in scientific notation, or as a
/// fraction `a/b`.
pub fn parse_number(s: &str) -> std::result::Result<f64, String> {
    let s = s.trim();
    let v = match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| format!("invalid number '{s}'"))?;
            let b: f64 = b.trim().parse().map_err(|_| format!("invalid number '{s}'"))?;
            if b == 0.0 {
                return Err(format!("zero denominator in '{s}'"));
            }
            a / b
        }
        None => s.parse().map_err(|_| format!("invalid number '{s}'"))?,
    };
    if !v.is_finite() {
        return Err(format!("'{s}' is not finite"));
    }
    Ok(v)
}

/// Exact rational from `a/b`, an integer, or a terminating decimal with an
/// optional exponent.
pub fn parse_rational(s: &str) -> std::result::Result<BigRational, String> {
    let s = s.trim();
    let bad = || format!("invalid rational '{s}'");
    if s.contains('/') {
        return BigRational::from_str(s).map_err(|_| bad());
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], s[k + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let sign = if int.starts_with('-') { "-" } else { "" };
    let int = int.trim_start_matches(['+', '-']);
    if int.is_empty() && frac.is_empty() || !(int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())) {
        return Err(bad());
    }
    let digits = format!("{sign}{}{frac}", if int.is_empty() { "0" } else { int });
    let scale = exp - frac.len() as i32;
    let text = if scale >= 0 {
        format!("{digits}{}", "0".repeat(scale as usize))
    } else {
        format!("{digits}/1{}", "0".repeat((-scale) as usize))
    };
    BigRational::from_str(&text).map_err(|_| bad())
}

/// Comma-separated list of numbers.
pub fn parse_list(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',').map(parse_number).collect()
}

/// `start:end:count` (geometric) or a comma-separated strictly increasing
/// list.
pub fn parse_s_grid(spec: &str) -> Result<Vec<f64>> {
    let grid = match spec.split(':').collect::<Vec<_>>()[..] {
        [a, b, n] => {
            let start = parse_number(a).map_err(|e| anyhow!(e))?;
            let end = parse_number(b).map_err(|e| anyhow!(e))?;
            let count: usize = n.trim().parse().with_context(|| format!("s-grid count '{n}'"))?;
            geometric_grid(start, end, count)?
        }
        [_] => parse_list(spec).map_err(|e| anyhow!(e))?,
        _ => bail!("invalid s-grid '{spec}' (expected start:end:count or a comma list)"),
    };
    if grid.is_empty() || grid.windows(2).any(|w| w[1] <= w[0]) {
        bail!("s-grid must be strictly increasing, got {grid:?}");
    }
    if grid.iter().any(|&s| s <= 0.0) {
        bail!("s-grid values must be positive, got {grid:?}");
    }
    Ok(grid)
}
