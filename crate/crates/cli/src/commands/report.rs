use anyhow::Result;
use clap::Args;
use nilspec_core::dual_trace::{growth_exponent, QuadratureSpec, TraceMethod};
use nilspec_core::fit::{geometric_grid, GrowthFit};
use nilspec_core::group::{verify_structure_constants, GroupId};
use nilspec_core::multiplier::{heat_decay, sobolev_check, sup_bound, trace_exponent, ExponentPair, PhiFunction};
use nilspec_core::representation::{sub_laplacian_identity_holds, DualPoint};
use nilspec_core::schrodinger::{build_symbol_cartan, build_symbol_engel, count_below, SchrodingerOp, SpectralConfig};
use nilspec_core::weyl::{counting_exponent, weyl_ratio};
use serde::Serialize;
use serde_json::{json, Value};

use super::bound::SUP_TOLERANCE;
use super::count::SLOPE_SLACK;
use super::trace::thinned;
use crate::config::{default_nodes, RunConfig};
use crate::output::Sink;
use crate::Status;

#[derive(Args, Debug)]
pub struct ReportArgs {
    /// Coarser quadrature and a shorter s-range for the trace checks.
    #[arg(long)]
    pub quick: bool,
}

#[derive(Debug, Serialize)]
struct Check {
    name: String,
    pass: bool,
    detail: Value,
}

#[derive(Debug, Serialize)]
struct Report {
    checks: Vec<Check>,
    pass: bool,
}

const GROUPS: [GroupId; 2] = [GroupId::Engel, GroupId::Cartan];

fn representative(group: GroupId) -> Result<(DualPoint, SchrodingerOp)> {
    Ok(match group {
        GroupId::Engel => (DualPoint::engel(1.0, 0.0)?, build_symbol_engel(1.0, 0.0)?),
        GroupId::Cartan => (DualPoint::cartan(1.0, 1.0, 0.0)?, build_symbol_cartan(1.0, 1.0, 0.0, true)?.scaled(2.0)),
    })
}

fn algebra_checks(out: &mut Vec<Check>) -> Result<()> {
    for g in GROUPS {
        let failures = verify_structure_constants(g);
        out.push(Check {
            name: format!("{g}: exact brackets"),
            pass: failures.is_empty(),
            detail: json!({ "failures": failures }),
        });
        let points = match g {
            GroupId::Engel => vec![DualPoint::engel(1.0, 0.0)?, DualPoint::engel(-0.5, 2.0)?],
            GroupId::Cartan => vec![DualPoint::cartan(1.0, 1.0, 0.0)?, DualPoint::cartan(0.5, -2.0, 1.5)?],
        };
        let ok = points.iter().map(sub_laplacian_identity_holds).collect::<nilspec_core::Result<Vec<_>>>()?;
        out.push(Check {
            name: format!("{g}: sub-Laplacian symbol identity"),
            pass: ok.iter().all(|&b| b),
            detail: json!({ "points": points, "holds": ok }),
        });
    }
    Ok(())
}

fn weyl_checks(out: &mut Vec<Check>, spectral: &SpectralConfig) -> Result<()> {
    let r = weyl_ratio(&SchrodingerOp::harmonic(), 1e3, spectral)?;
    out.push(Check {
        name: "harmonic: Weyl ratio at s=1e3".into(),
        pass: (r - 1.0).abs() <= 0.02,
        detail: json!({ "ratio": r, "tolerance": 0.02 }),
    });
    for g in GROUPS {
        let (point, op) = representative(g)?;
        let s = 5e3;
        let r = weyl_ratio(&op, s, spectral)?;
        out.push(Check {
            name: format!("{g}: Weyl ratio at s={s}"),
            pass: (r - 1.0).abs() <= 0.1,
            detail: json!({ "point": point, "ratio": r, "tolerance": 0.1 }),
        });
        let grid = geometric_grid(1e2, 1e4, 5)?;
        let counts = grid
            .iter()
            .map(|&s| count_below(&op, s, spectral).map(|n| n as f64))
            .collect::<nilspec_core::Result<Vec<_>>>()?;
        let slope = GrowthFit::fit(&grid, &counts)?.slope;
        let limit = counting_exponent(g) + SLOPE_SLACK;
        out.push(Check {
            name: format!("{g}: counting slope"),
            pass: slope <= limit,
            detail: json!({ "point": point, "s": grid, "N": counts, "slope": slope, "limit": limit }),
        });
    }
    Ok(())
}

fn trace_checks(out: &mut Vec<Check>, spectral: &SpectralConfig, quick: bool) -> Result<()> {
    let grid = if quick { geometric_grid(1e2, 1e3, 3)? } else { geometric_grid(1e2, 1e4, 5)? };
    for g in GROUPS {
        let nodes: Vec<usize> = default_nodes(g).into_iter().map(|n| if quick { n / 2 } else { n }).collect();
        let spec = QuadratureSpec::gauss(nodes);
        let sweep = growth_exponent(g, &grid, TraceMethod::VolumeBound, &spec, spectral)?;
        let fit = sweep.report();
        out.push(Check {
            name: format!("{g}: trace growth slope"),
            pass: fit.pass,
            detail: json!({ "quadrature": spec, "s": grid, "fit": fit }),
        });
        let cv = thinned(&grid)
            .into_iter()
            .map(|s| nilspec_core::dual_trace::cross_validate(g, s, &spec, spectral))
            .collect::<nilspec_core::Result<Vec<_>>>()?;
        out.push(Check {
            name: format!("{g}: eigen-count cross-validation"),
            pass: cv.iter().all(|c| c.pass),
            detail: json!(cv.iter().map(|c| json!({ "s": c.s, "relative_gap": c.relative_gap })).collect::<Vec<_>>()),
        });
    }
    Ok(())
}

fn multiplier_checks(out: &mut Vec<Check>) -> Result<()> {
    let pair = ExponentPair::new(4.0 / 3.0, 4.0)?;
    for g in GROUPS {
        let d = heat_decay(g, &pair, 1.0)?;
        out.push(Check {
            name: format!("{g}: heat decay closed form"),
            pass: d.rel_err <= SUP_TOLERANCE,
            detail: json!(d),
        });
        let needed = trace_exponent(g) * pair.inv_r();
        let at = sobolev_check(g, needed, 0.0, &pair);
        let below = sobolev_check(g, needed - 0.25, 0.0, &pair);
        let finite_at = sup_bound(&PhiFunction::power(needed)?, g, &pair).finite;
        let finite_below = sup_bound(&PhiFunction::power(needed - 0.25)?, g, &pair).finite;
        out.push(Check {
            name: format!("{g}: Sobolev condition matches finiteness"),
            pass: at.holds && finite_at && !below.holds && !finite_below,
            detail: json!({ "a": needed, "margin": at.margin, "below_margin": below.margin }),
        });
    }
    Ok(())
}

pub fn run(args: &ReportArgs, sink: &Sink) -> Result<Status> {
    let cfg: &RunConfig = sink.config();
    let mut checks = Vec::new();
    algebra_checks(&mut checks)?;
    weyl_checks(&mut checks, &cfg.spectral)?;
    trace_checks(&mut checks, &cfg.spectral, args.quick)?;
    multiplier_checks(&mut checks)?;
    let pass = checks.iter().all(|c| c.pass);
    sink.json(&Report { checks, pass })?;
    Ok(if pass { Status::Pass } else { Status::Fail })
}
