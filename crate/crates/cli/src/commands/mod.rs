pub mod bound;
pub mod count;
pub mod group;
pub mod report;
pub mod spectrum;
pub mod trace;
pub mod volume;

use anyhow::{bail, Result};
use clap::Args;
use nilspec_core::group::GroupId;
use nilspec_core::representation::DualPoint;
use nilspec_core::schrodinger::{build_symbol_cartan, build_symbol_engel, GeneralizedFamily, SchrodingerOp};
use serde::Serialize;

use crate::config::parse_number;
use crate::GroupFlag;

/// Selects the Schrödinger operator: the symbol at a dual point, a
/// generalized-family symbol, or the harmonic oscillator.
#[derive(Args, Debug)]
pub struct PointArgs {
    #[command(flatten)]
    pub group: GroupFlag,
    /// lambda (default 1).
    #[arg(short = 'l', long, value_parser = parse_number)]
    pub lambda: Option<f64>,
    /// mu (default 0 for Engel, 1 for Cartan).
    #[arg(short = 'm', long, value_parser = parse_number)]
    pub mu: Option<f64>,
    /// nu, Cartan only (default 0).
    #[arg(short = 'n', long, value_parser = parse_number)]
    pub nu: Option<f64>,
    /// Use -d²/du² + u² instead of a group symbol.
    #[arg(long, conflicts_with_all = ["lambda", "mu", "nu", "generalized", "no_inverse", "rescaled"])]
    pub harmonic: bool,
    /// Cartan: drop the inverse terms X4^{-2}, X5^{-2}.
    #[arg(long)]
    pub no_inverse: bool,
    /// Cartan: use rho·B, whose kinetic coefficient is 1.
    #[arg(long)]
    pub rescaled: bool,
    /// Exponents of the generalized family, e.g. 1,1,1,1 (Engel) or 1,1,1,1,1,1 (Cartan).
    #[arg(long, value_delimiter = ',', conflicts_with = "no_inverse")]
    pub generalized: Option<Vec<u32>>,
}

/// What was actually built, for the JSON outputs.
#[derive(Clone, Debug, Serialize)]
pub struct OperatorInfo {
    pub kind: &'static str,
    pub point: Option<DualPoint>,
    pub exponents: Option<Vec<u32>>,
    pub rescaled: bool,
    /// Kinetic coefficient `a` in `-a d²/du² + V(u)`.
    pub kinetic: f64,
    /// Coefficients of `V` in powers of `u²`.
    pub potential: Vec<f64>,
    /// `N_op(s) = N_built(scale·s)`; 1 unless the operator was rescaled.
    pub threshold_scale: f64,
}

impl PointArgs {
    pub fn build(&self, group: GroupId) -> Result<(SchrodingerOp, OperatorInfo)> {
        if self.harmonic {
            let op = SchrodingerOp::harmonic();
            let info = info("harmonic", None, None, false, &op, 1.0);
            return Ok((op, info));
        }
        if group == GroupId::Engel && (self.nu.is_some() || self.no_inverse || self.rescaled) {
            bail!("--nu, --no-inverse and --rescaled apply to the Cartan group only");
        }
        let lambda = self.lambda.unwrap_or(1.0);
        let mu = self.mu.unwrap_or(match group {
            GroupId::Engel => 0.0,
            GroupId::Cartan => 1.0,
        });
        let point = DualPoint::new(group, lambda, mu, self.nu.unwrap_or(0.0))?;
        let (base, kind) = match (&self.generalized, group) {
            (Some(e), _) => (GeneralizedFamily::new(group, e.clone())?.build(&point)?, "generalized"),
            (None, GroupId::Engel) => (build_symbol_engel(lambda, mu)?, "engel_symbol"),
            (None, GroupId::Cartan) => (build_symbol_cartan(lambda, mu, point.nu, !self.no_inverse)?, "cartan_symbol"),
        };
        let (op, scale) = if self.rescaled { (base.scaled(point.rho()), point.rho()) } else { (base, 1.0) };
        let info = info(kind, Some(point), self.generalized.clone(), self.rescaled, &op, scale);
        Ok((op, info))
    }
}

fn info(
    kind: &'static str,
    point: Option<DualPoint>,
    exponents: Option<Vec<u32>>,
    rescaled: bool,
    op: &SchrodingerOp,
    threshold_scale: f64,
) -> OperatorInfo {
    OperatorInfo {
        kind,
        point,
        exponents,
        rescaled,
        kinetic: op.kinetic(),
        potential: op.potential().even_coeffs().to_vec(),
        threshold_scale,
    }
}
