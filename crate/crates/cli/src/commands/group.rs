use std::io::Write;

use anyhow::{anyhow, bail, Result};
use clap::{Args, Subcommand};
use nilspec_core::group::{vector_field, vector_field_bracket_table, ExactElement, GroupElement, GroupId};
use num_rational::BigRational;

use crate::config::parse_rational;
use crate::output::Sink;
use crate::{GroupFlag, Status};

#[derive(Args, Debug)]
pub struct GroupArgs {
    #[command(flatten)]
    pub group: GroupFlag,
    #[command(subcommand)]
    pub op: GroupOp,
}

#[derive(Subcommand, Debug)]
pub enum GroupOp {
    /// Product g·h of two comma-separated coordinate vectors.
    Mul {
        /// Left factor, e.g. 1,0,0,0 or 1/2,-1,0,0.
        #[arg(allow_hyphen_values = true)]
        g: String,
        /// Right factor.
        #[arg(allow_hyphen_values = true)]
        h: String,
    },
    /// Inverse of g.
    Inverse {
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
    /// Dilation D_r(g), r > 0.
    Dilate {
        r: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
    /// Bracket tables of the Lie algebra basis I_k and of the vector fields X_k.
    Commutators,
    /// Left-invariant vector field X_i as a differential operator.
    Field { i: usize },
}

fn element(group: GroupId, text: &str) -> Result<ExactElement> {
    let coords = text
        .split(',')
        .map(parse_rational)
        .collect::<std::result::Result<Vec<BigRational>, _>>()
        .map_err(|e| anyhow!(e))?;
    Ok(GroupElement::new(group, coords)?)
}

pub fn run(args: &GroupArgs, sink: &Sink) -> Result<Status> {
    let group = sink.config().group;
    let lines: Vec<String> = match &args.op {
        GroupOp::Mul { g, h } => vec![element(group, g)?.multiply(&element(group, h)?)?.to_string()],
        GroupOp::Inverse { g } => vec![element(group, g)?.inverse().to_string()],
        GroupOp::Dilate { r, g } => {
            let r = parse_rational(r).map_err(|e| anyhow!(e))?;
            vec![element(group, g)?.dilate(&r)?.to_string()]
        }
        GroupOp::Commutators => commutator_lines(group),
        GroupOp::Field { i } => {
            if *i == 0 || *i > group.dimension() {
                bail!("field index {i} out of range 1..={}", group.dimension());
            }
            vec![format!("X{i} = {}", vector_field::<BigRational>(group, *i)?)]
        }
    };
    sink.text(|out: &mut dyn Write| {
        for line in &lines {
            writeln!(out, "{line}")?;
        }
        Ok(())
    })?;
    Ok(Status::Pass)
}

/// `[Ii,Ij]=Ik` lines for the abstract basis followed by the signed
/// brackets of the vector fields themselves.
fn commutator_lines(group: GroupId) -> Vec<String> {
    let n = group.dimension();
    let mut lines = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            let rhs = group
                .structure_constants()
                .iter()
                .find(|&&(a, b, _)| a == i && b == j)
                .map_or("0".to_string(), |&(_, _, k)| format!("I{k}"));
            lines.push(format!("[I{i},I{j}]={rhs}"));
        }
    }
    for (i, j, sign, k) in vector_field_bracket_table(group) {
        let rhs = match sign {
            0 => "0".to_string(),
            1 => format!("X{k}"),
            _ => format!("-X{k}"),
        };
        lines.push(format!("[X{i},X{j}]={rhs}"));
    }
    lines
}
