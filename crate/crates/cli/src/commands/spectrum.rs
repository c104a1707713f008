use std::io::Write;

use anyhow::Result;
use clap::Args;
use nilspec_core::schrodinger::{spectrum_below, write_spectrum_csv};

use super::PointArgs;
use crate::config::parse_number;
use crate::output::Sink;
use crate::Status;

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// Threshold: report every eigenvalue strictly below s.
    #[arg(short = 's', long, value_parser = parse_number)]
    pub s: f64,
}

pub fn run(args: &SpectrumArgs, sink: &Sink) -> Result<Status> {
    let cfg = sink.config();
    let (op, _) = args.point.build(cfg.group)?;
    let (domain, eigs) = spectrum_below(&op, args.s, &cfg.spectral)?;
    sink.text(|out: &mut dyn Write| write_spectrum_csv(&eigs, out))?;
    Ok(if domain.converged { Status::Pass } else { Status::Fail })
}
