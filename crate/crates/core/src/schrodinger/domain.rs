use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use super::{discretize, eigenvalues_below, sturm_count, SchrodingerOp};
use crate::error::{Error, Result};

/// Discretisation controls.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectralConfig {
    /// Domain margin: `V(±L) ≥ κ·s`.
    pub kappa: f64,
    /// Grid points per shortest classical wavelength `2π/√(s/a)`, halved.
    pub points_per_wavelength: f64,
    /// Bisection width for individual eigenvalues.
    pub tol: f64,
    pub min_points: usize,
    pub max_points: usize,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        Self { kappa: 4.0, points_per_wavelength: 10.0, tol: 1e-8, min_points: 64, max_points: 1 << 22 }
    }
}

impl SpectralConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.kappa > 1.0) {
            return Err(Error::InvalidArgument(format!("kappa must exceed 1, got {}", self.kappa)));
        }
        if !(self.points_per_wavelength > 0.0) {
            return Err(Error::InvalidArgument("points_per_wavelength must be positive".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidArgument(format!("tol must be positive, got {}", self.tol)));
        }
        if self.min_points < 3 || self.max_points < self.min_points {
            return Err(Error::InvalidArgument("need 3 <= min_points <= max_points".into()));
        }
        Ok(())
    }
}

/// Grid selected for counting eigenvalues below `s`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DomainChoice {
    pub half_width: f64,
    pub points: usize,
    /// Eigenvalues below `s`, equal at `points` and at `2·points`.
    pub count: usize,
    /// Number of grid doublings after the initial choice.
    pub refinements: usize,
    /// False when `max_points` stopped the refinement before two
    /// consecutive counts agreed.
    pub converged: bool,
}

impl DomainChoice {
    fn empty() -> Self {
        Self { half_width: 0.0, points: 0, count: 0, refinements: 0, converged: true }
    }
}

/// Chooses `L` with `V(u) ≥ κ·s` for `|u| ≥ L`, then `n` with
/// `h ≤ π/(ppw·√(s/a))`, and doubles `n` until the count below `s` is the
/// same on two consecutive grids.
pub fn auto_domain(op: &SchrodingerOp, s: f64, cfg: &SpectralConfig) -> Result<DomainChoice> {
    cfg.validate()?;
    if !s.is_finite() {
        return Err(Error::InvalidArgument(format!("threshold must be finite, got {s}")));
    }
    let (_, v_min) = op.potential().minimum();
    if s <= v_min {
        return Ok(DomainChoice::empty());
    }
    let level = (cfg.kappa * s).max(v_min + cfg.kappa * (s - v_min));
    let half_width = op.potential().outer_crossing(level).max(f64::MIN_POSITIVE.sqrt());
    let energy = s.max(s - v_min);
    let h_max = std::f64::consts::PI / (cfg.points_per_wavelength * (energy / op.kinetic()).sqrt());
    let mut n = ((2.0 * half_width / h_max).ceil() as usize + 1).max(cfg.min_points);
    if n > cfg.max_points {
        n = cfg.max_points;
    }
    let count_at = |n: usize| discretize(op, half_width, n).map(|t| sturm_count(&t, s));
    let mut count = count_at(n)?;
    let mut refinements = 0;
    loop {
        let finer = 2 * n;
        if finer > cfg.max_points {
            return Ok(DomainChoice { half_width, points: n, count, refinements, converged: false });
        }
        let c = count_at(finer)?;
        if c == count {
            return Ok(DomainChoice { half_width, points: n, count, refinements, converged: true });
        }
        n = finer;
        count = c;
        refinements += 1;
    }
}

/// `N(s)`: eigenvalues of `op` strictly below `s`.
pub fn count_below(op: &SchrodingerOp, s: f64, cfg: &SpectralConfig) -> Result<usize> {
    Ok(auto_domain(op, s, cfg)?.count)
}

/// Eigenvalues of `op` below `s` on the automatically chosen grid.
pub fn spectrum_below(op: &SchrodingerOp, s: f64, cfg: &SpectralConfig) -> Result<(DomainChoice, Vec<f64>)> {
    let choice = auto_domain(op, s, cfg)?;
    if choice.count == 0 {
        return Ok((choice, Vec::new()));
    }
    let t = discretize(op, choice.half_width, choice.points)?;
    let eigs = eigenvalues_below(&t, s, cfg.tol)?;
    Ok((choice, eigs))
}

/// `index,eigenvalue` rows.
pub fn write_spectrum_csv<W: Write>(eigenvalues: &[f64], mut out: W) -> io::Result<()> {
    writeln!(out, "index,eigenvalue")?;
    for (k, e) in eigenvalues.iter().enumerate() {
        writeln!(out, "{k},{e:.16e}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_domain() {
        let op = SchrodingerOp::harmonic();
        let d = auto_domain(&op, 100.0, &SpectralConfig::default()).unwrap();
        assert!((d.half_width - 20.0).abs() < 1e-9);
        assert_eq!(d.count, 50);
        assert!(d.converged);
    }

    #[test]
    fn below_minimum_short_circuits() {
        let op = super::super::build_symbol_engel(1.0, 0.0).unwrap();
        let d = auto_domain(&op, 1.5, &SpectralConfig::default()).unwrap();
        assert_eq!(d, DomainChoice::empty());
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_spectrum_csv(&[1.0, 3.0], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next(), Some("index,eigenvalue"));
        assert_eq!(text.lines().count(), 3);
    }
}
