//! Operator symbols as one-dimensional Schrödinger operators
//! `−a·d²/du² + V(u)`, their finite-difference discretisation and
//! eigenvalue counting by Sturm sequences.

mod domain;
mod potential;
mod tridiag;

use serde::Serialize;

pub use domain::{auto_domain, count_below, spectrum_below, write_spectrum_csv, DomainChoice, SpectralConfig};
pub use potential::Potential;
pub use tridiag::{discretize, eigenvalues_below, sturm_count, TridiagSystem};

use crate::error::{Error, Result};
use crate::group::GroupId;
use crate::representation::{DualPoint, EPS_DUAL};
use potential::{poly_add, poly_pow};

/// `−a·d²/du² + V(u)` on `L²(R)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SchrodingerOp {
    kinetic: f64,
    potential: Potential,
}

impl SchrodingerOp {
    pub fn new(kinetic: f64, potential: Potential) -> Result<Self> {
        if !(kinetic > 0.0 && kinetic.is_finite()) {
            return Err(Error::InvalidArgument(format!("kinetic coefficient must be positive, got {kinetic}")));
        }
        Ok(Self { kinetic, potential })
    }

    /// `−d²/du² + u²`, spectrum `{2k + 1}`.
    pub fn harmonic() -> Self {
        Self { kinetic: 1.0, potential: Potential::new(vec![0.0, 1.0]).expect("u² is coercive") }
    }

    pub fn kinetic(&self) -> f64 {
        self.kinetic
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    /// `c·(−a·d²/du² + V)`, `c > 0`.
    pub fn scaled(&self, c: f64) -> Self {
        assert!(c > 0.0, "scale must be positive");
        Self { kinetic: self.kinetic * c, potential: self.potential.scaled(c) }
    }

    /// Operator symbol `π(A)` or `π(B)` at a dual point.
    pub fn for_dual_point(pi: &DualPoint) -> Result<Self> {
        match pi.group {
            GroupId::Engel => build_symbol_engel(pi.lambda, pi.mu),
            GroupId::Cartan => build_symbol_cartan(pi.lambda, pi.mu, pi.nu, true),
        }
    }
}

/// Engel symbol `−d²/du² + ¼(λu² − μ/λ)² + (λu)² + λ² + λ⁻²`.
pub fn build_symbol_engel(lambda: f64, mu: f64) -> Result<SchrodingerOp> {
    DualPoint::engel(lambda, mu)?;
    let l2 = lambda * lambda;
    let coeffs = vec![mu * mu / (4.0 * l2) + l2 + 1.0 / l2, l2 - mu / 2.0, l2 / 4.0];
    SchrodingerOp::new(1.0, Potential::new(coeffs)?)
}

/// Cartan symbol with `ρ = λ² + μ²`:
/// `−ρ⁻¹d²/du² + ¼(ν + ρ²u²)²/ρ + ρ²u² + ρ [+ λ⁻² + μ⁻²]`.
pub fn build_symbol_cartan(lambda: f64, mu: f64, nu: f64, include_inverse: bool) -> Result<SchrodingerOp> {
    DualPoint::cartan(lambda, mu, nu)?;
    if include_inverse {
        for (name, v) in [("lambda", lambda), ("mu", mu)] {
            if v.abs() < EPS_DUAL {
                return Err(Error::DegenerateDualPoint {
                    constraint: format!("inverse terms require |{name}| >= {EPS_DUAL:e}, got {name} = {v}"),
                });
            }
        }
    }
    let rho = lambda * lambda + mu * mu;
    let mut c0 = nu * nu / (4.0 * rho) + rho;
    if include_inverse {
        c0 += 1.0 / (lambda * lambda) + 1.0 / (mu * mu);
    }
    let coeffs = vec![c0, nu * rho / 2.0 + rho * rho, rho.powi(3) / 4.0];
    SchrodingerOp::new(1.0 / rho, Potential::new(coeffs)?)
}

/// Exponents of the generalised operators
///
/// Engel `A = −(X1² + X2^{2n2} ± X3^{2n3} ± X4^{2n4} ± X4^{−2n5})`,
/// Cartan `B = −(X1² + X2^{2n1} ± X3^{2n2} ± X4^{2n3} ± X5^{2n4} ± X4^{−2n5} ± X5^{−2n6})`.
///
/// The sign in front of each term is `+` for odd and `−` for even exponents,
/// which turns `π(X_j)^{2n} = (−1)^n m_j(u)^{2n}` into `+m_j(u)^{2n}` in the symbol.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneralizedFamily {
    pub group: GroupId,
    /// `[n2, n3, n4, n5]` for Engel, `[n1, .., n6]` for Cartan.
    pub exponents: Vec<u32>,
}

impl GeneralizedFamily {
    pub fn new(group: GroupId, exponents: Vec<u32>) -> Result<Self> {
        let expected = match group {
            GroupId::Engel => 4,
            GroupId::Cartan => 6,
        };
        if exponents.len() != expected {
            return Err(Error::InvalidExponent(format!(
                "{group} family takes {expected} exponents, got {}",
                exponents.len()
            )));
        }
        if let Some(n) = exponents.iter().find(|&&n| n < 1) {
            return Err(Error::InvalidExponent(format!("exponents must be >= 1, got {n}")));
        }
        if group == GroupId::Cartan && exponents[0] != 1 {
            return Err(Error::InvalidExponent(format!(
                "X2 is a first-order operator in the Cartan representation; X2^{} is not a Schrödinger operator",
                2 * exponents[0]
            )));
        }
        Ok(Self { group, exponents })
    }

    /// Sign in front of each term, `+1` iff the exponent is odd.
    pub fn signs(&self) -> Vec<i8> {
        self.exponents.iter().map(|n| if n % 2 == 1 { 1 } else { -1 }).collect()
    }

    /// Symbol at a dual point.
    pub fn build(&self, pi: &DualPoint) -> Result<SchrodingerOp> {
        if pi.group != self.group {
            return Err(Error::GroupMismatch { left: self.group, right: pi.group });
        }
        let (l, m, n) = (pi.lambda, pi.mu, pi.nu);
        let e = &self.exponents;
        // polynomials in w = u²
        match self.group {
            GroupId::Engel => {
                let m2 = poly_pow(&[-m / (2.0 * l), l / 2.0], 2 * e[0]);
                let m3 = poly_pow(&[0.0, l * l], e[1]);
                let c = (l * l).powi(e[2] as i32) + (l * l).powi(-(e[3] as i32));
                let v = poly_add(&poly_add(&m2, &m3), &[c]);
                SchrodingerOp::new(1.0, Potential::new(v)?)
            }
            GroupId::Cartan => {
                if l.abs() < EPS_DUAL || m.abs() < EPS_DUAL {
                    return Err(Error::DegenerateDualPoint {
                        constraint: "inverse terms require nonzero lambda and mu".into(),
                    });
                }
                let rho = l * l + m * m;
                let sub = [n * n / (4.0 * rho), n * rho / 2.0, rho.powi(3) / 4.0];
                let m3 = poly_pow(&[0.0, rho * rho], e[1]);
                let c = (l * l).powi(e[2] as i32)
                    + (m * m).powi(e[3] as i32)
                    + (l * l).powi(-(e[4] as i32))
                    + (m * m).powi(-(e[5] as i32));
                let v = poly_add(&poly_add(&sub, &m3), &[c]);
                SchrodingerOp::new(1.0 / rho, Potential::new(v)?)
            }
        }
    }
}
