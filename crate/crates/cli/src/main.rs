mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nilspec_core::group::GroupId;

use crate::config::{parse_number, Overrides, RunConfig};
use crate::output::{Provenance, Sink};

/// Spectral estimates for sub-Laplacian-type operators on the Engel and
/// Cartan groups.
#[derive(Parser, Debug)]
#[command(name = "nilspec", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// TOML or JSON config file; its values override command-line flags.
    #[arg(long, global = true, env = "NILSPEC_CONFIG")]
    config: Option<PathBuf>,
    /// Write results to this file instead of stdout.
    #[arg(long, short = 'o', global = true)]
    output: Option<PathBuf>,
    /// Worker threads for dual-grid sweeps.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for Monte Carlo cross-checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Domain-size factor for the spectral discretisation.
    #[arg(long, global = true, value_parser = parse_number)]
    kappa: Option<f64>,
    /// Eigenvalue bisection tolerance.
    #[arg(long, global = true, value_parser = parse_number)]
    tol: Option<f64>,
    /// Grid points per local wavelength.
    #[arg(long, global = true, value_parser = parse_number)]
    ppw: Option<f64>,
    /// Upper bound on discretisation points.
    #[arg(long, global = true)]
    max_points: Option<usize>,
}

#[derive(Args, Debug, Clone, Copy, Default)]
#[group(multiple = false)]
pub struct GroupFlag {
    /// Engel group (default).
    #[arg(long)]
    pub engel: bool,
    /// Cartan group.
    #[arg(long)]
    pub cartan: bool,
}

impl GroupFlag {
    fn group(self) -> Option<GroupId> {
        match (self.engel, self.cartan) {
            (true, _) => Some(GroupId::Engel),
            (_, true) => Some(GroupId::Cartan),
            _ => None,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact group arithmetic and bracket tables.
    Group(commands::group::GroupArgs),
    /// Eigenvalues of the symbol at a dual point below a threshold (CSV).
    #[command(allow_negative_numbers = true)]
    Spectrum(commands::spectrum::SpectrumArgs),
    /// Eigenvalue counts N(s) over an s-grid and their growth slope (JSON).
    #[command(allow_negative_numbers = true)]
    Count(commands::count::CountArgs),
    /// Phase-space volume and Weyl ratio at a dual point (JSON).
    #[command(allow_negative_numbers = true)]
    Volume(commands::volume::VolumeArgs),
    /// Dual trace sweep and growth-exponent fit (JSON or CSV).
    Trace(commands::trace::TraceArgs),
    /// Multiplier bounds, Sobolev checks and heat decay (JSON).
    Bound(commands::bound::BoundArgs),
    /// Run the standard checks and summarise them (JSON).
    Report(commands::report::ReportArgs),
}

impl Command {
    fn group(&self) -> Option<GroupId> {
        match self {
            Command::Group(a) => a.group.group(),
            Command::Spectrum(a) => a.point.group.group(),
            Command::Count(a) => a.point.group.group(),
            Command::Volume(a) => a.point.group.group(),
            Command::Trace(a) => a.group.group(),
            Command::Bound(a) => a.group(),
            Command::Report(_) => None,
        }
    }

    fn overrides(&self) -> Overrides {
        let mut o = Overrides { group: self.group(), ..Default::default() };
        match self {
            Command::Count(a) => o.s_grid = a.s.clone(),
            Command::Trace(a) => {
                o.s_grid = a.s.clone();
                o.nodes = a.nodes.clone();
                o.rule = a.rule.clone();
                o.method = a.method.clone();
            }
            Command::Bound(a) => a.fill_overrides(&mut o),
            _ => {}
        }
        o
    }
}

/// Outcome of a command: whether every requested check passed.
pub enum Status {
    Pass,
    Fail,
}

fn run(cli: Cli) -> anyhow::Result<Status> {
    let g = &cli.global;
    let flags = Overrides {
        kappa: g.kappa,
        tol: g.tol,
        points_per_wavelength: g.ppw,
        max_points: g.max_points,
        threads: g.threads,
        seed: g.seed,
        output: g.output.clone(),
        ..Default::default()
    }
    .overlay(cli.command.overrides());
    let merged = match &g.config {
        Some(path) => flags.overlay(Overrides::from_file(path)?),
        None => flags,
    };
    let cfg = RunConfig::resolve(merged, g.config.clone())?;
    if let Some(n) = cfg.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let command = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    let sink = Sink::new(Provenance::new(command, cfg));
    match cli.command {
        Command::Group(a) => commands::group::run(&a, &sink),
        Command::Spectrum(a) => commands::spectrum::run(&a, &sink),
        Command::Count(a) => commands::count::run(&a, &sink),
        Command::Volume(a) => commands::volume::run(&a, &sink),
        Command::Trace(a) => commands::trace::run(&a, &sink),
        Command::Bound(a) => commands::bound::run(&a, &sink),
        Command::Report(a) => commands::report::run(&a, &sink),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
