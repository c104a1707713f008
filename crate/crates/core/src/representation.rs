//! Dixmier representations of the Engel and Cartan groups on `L²(R)`,
//! discretised on uniform grids, and their infinitesimal generators.
//!
//! Engel, `λ ≠ 0`:
//! `π(x)h(u) = exp(i(−μ/(2λ)x2 + λx4 − λx3u + ½λx2u²)) h(u + x1)`.
//!
//! Cartan, `ρ = λ² + μ² ≠ 0`:
//! `π(x)h(u) = exp(iA(x,u)) h(u + (λx1 + μx2)/ρ)` with
//!
//! ```text
//! A = −½ν/ρ(μx1 − λx2) + λx4 + μx5
//!     − μ/(6ρ)(λ²x1³ + 3λμx1²x2 + 3μ²x1x2² − λμx2³)
//!     − ρx3u − μ²x1x2u − ½λμ(x1² − x2²)u − ½ρ(μx1 − λx2)u²
//! ```
//!
//! which is the unique polynomial phase making `π` a homomorphism of the
//! Cartan law whose generators are `π(X1) = −½iνμ/ρ − ½iρμu² + (λ/ρ)d/du`,
//! `π(X2) = ½iλν/ρ + ½iρλu² + (μ/ρ)d/du`, `π(X3) = −iρu`, `π(X4) = iλ`,
//! `π(X5) = iμ`.

use std::io::{self, Write};

use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use serde::Serialize;

use crate::algebra::{exact_from_f64, Coeff, Poly, PolyDiffOp};
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupId};

/// Guard on the representation parameters: `|λ| ≥ ε` (Engel),
/// `λ² + μ² ≥ ε²` (Cartan).
pub const EPS_DUAL: f64 = 1e-6;

/// Relative L² mass lost through the grid boundary above which results are
/// flagged.
pub const BOUNDARY_TOLERANCE: f64 = 1e-10;

/// Parameters of an irreducible representation: `(λ, μ)` for Engel,
/// `(λ, μ, ν)` for Cartan (`ν = 0` for Engel).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DualPoint {
    pub group: GroupId,
    pub lambda: f64,
    pub mu: f64,
    pub nu: f64,
}

impl DualPoint {
    pub fn engel(lambda: f64, mu: f64) -> Result<Self> {
        Self::new(GroupId::Engel, lambda, mu, 0.0)
    }

    pub fn cartan(lambda: f64, mu: f64, nu: f64) -> Result<Self> {
        Self::new(GroupId::Cartan, lambda, mu, nu)
    }

    pub fn new(group: GroupId, lambda: f64, mu: f64, nu: f64) -> Result<Self> {
        if !(lambda.is_finite() && mu.is_finite() && nu.is_finite()) {
            return Err(Error::DegenerateDualPoint { constraint: "parameters must be finite".into() });
        }
        match group {
            GroupId::Engel if lambda.abs() < EPS_DUAL => Err(Error::DegenerateDualPoint {
                constraint: format!("Engel requires |lambda| >= {EPS_DUAL:e}, got lambda = {lambda}"),
            }),
            GroupId::Cartan if lambda * lambda + mu * mu < EPS_DUAL * EPS_DUAL => Err(Error::DegenerateDualPoint {
                constraint: format!(
                    "Cartan requires lambda^2 + mu^2 >= {:e}, got {}",
                    EPS_DUAL * EPS_DUAL,
                    lambda * lambda + mu * mu
                ),
            }),
            _ => Ok(Self { group, lambda, mu, nu }),
        }
    }

    /// `λ² + μ²` (Cartan scale); `λ²` for Engel.
    pub fn rho(&self) -> f64 {
        match self.group {
            GroupId::Engel => self.lambda * self.lambda,
            GroupId::Cartan => self.lambda * self.lambda + self.mu * self.mu,
        }
    }

    /// Phase `θ(x, u)` with `π(x)h(u) = e^{iθ} h(u + shift(x))`.
    pub fn phase(&self, x: &[f64], u: f64) -> f64 {
        let (l, m, n) = (self.lambda, self.mu, self.nu);
        match self.group {
            GroupId::Engel => -m / (2.0 * l) * x[1] + l * x[3] - l * x[2] * u + 0.5 * l * x[1] * u * u,
            GroupId::Cartan => {
                let rho = self.rho();
                let (x1, x2, x3, x4, x5) = (x[0], x[1], x[2], x[3], x[4]);
                let cubic =
                    l * l * x1.powi(3) + 3.0 * l * m * x1 * x1 * x2 + 3.0 * m * m * x1 * x2 * x2 - l * m * x2.powi(3);
                -0.5 * n / rho * (m * x1 - l * x2) + l * x4 + m * x5
                    - m / (6.0 * rho) * cubic
                    - rho * x3 * u
                    - m * m * x1 * x2 * u
                    - 0.5 * l * m * (x1 * x1 - x2 * x2) * u
                    - 0.5 * rho * (m * x1 - l * x2) * u * u
            }
        }
    }

    /// Translation applied to the argument of `h`.
    pub fn shift(&self, x: &[f64]) -> f64 {
        match self.group {
            GroupId::Engel => x[0],
            GroupId::Cartan => (self.lambda * x[0] + self.mu * x[1]) / self.rho(),
        }
    }
}

/// Samples of a function on the uniform grid `u_k = −L + k·2L/(n−1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    half_width: f64,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(half_width: f64, values: Vec<Complex64>) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::InvalidGrid(format!("half-width must be positive, got {half_width}")));
        }
        if values.len() < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 points, got {}", values.len())));
        }
        Ok(Self { half_width, values })
    }

    pub fn from_fn(half_width: f64, n: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let step = 2.0 * half_width / (n.max(2) - 1) as f64;
        Self::new(half_width, (0..n).map(|k| f(-half_width + k as f64 * step)).collect())
    }

    /// Normalised Gaussian `e^{−(u−c)²/(2w²)}` with an optional chirp.
    pub fn gaussian(half_width: f64, n: usize, center: f64, width: f64, chirp: f64) -> Result<Self> {
        Self::from_fn(half_width, n, |u| {
            let d = u - center;
            Complex64::from_polar((-d * d / (2.0 * width * width)).exp(), chirp * d * d)
        })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn step(&self) -> f64 {
        2.0 * self.half_width / (self.values.len() - 1) as f64
    }

    pub fn u(&self, k: usize) -> f64 {
        -self.half_width + k as f64 * self.step()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Discrete L² norm by the trapezoid rule.
    pub fn l2_norm(&self) -> f64 {
        trapezoid_norm(&self.values, self.step())
    }

    /// `‖self − other‖₂` on a shared grid.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!(self.values.len(), other.values.len(), "grids differ");
        let diff: Vec<Complex64> = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        trapezoid_norm(&diff, self.step())
    }

    /// Eighth-order central difference derivative; samples beyond the grid
    /// are taken as zero.
    pub fn derivative(&self) -> Vec<Complex64> {
        const C: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
        let n = self.values.len() as isize;
        let at = |k: isize| if (0..n).contains(&k) { self.values[k as usize] } else { Complex64::new(0.0, 0.0) };
        let inv = 1.0 / self.step();
        (0..n)
            .map(|k| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, c) in C.iter().enumerate() {
                    let j = j as isize + 1;
                    acc += (at(k + j) - at(k - j)) * *c;
                }
                acc * inv
            })
            .collect()
    }

    /// CSV with header `u,re,im`, full double precision.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "u,re,im")?;
        for (k, v) in self.values.iter().enumerate() {
            writeln!(out, "{:.16e},{:.16e},{:.16e}", self.u(k), v.re, v.im)?;
        }
        Ok(())
    }
}

fn trapezoid_norm(values: &[Complex64], step: f64) -> f64 {
    let n = values.len();
    let mut acc = 0.0;
    for (k, v) in values.iter().enumerate() {
        let w = if k == 0 || k + 1 == n { 0.5 } else { 1.0 };
        acc += w * v.norm_sqr();
    }
    (acc * step).sqrt()
}

/// Result of a representation action with its boundary diagnostic.
#[derive(Clone, Debug)]
pub struct RepResult {
    pub function: GridFunction,
    /// L² mass of the input that left the grid, relative to the input norm.
    pub lost_mass: f64,
    pub boundary_warning: bool,
}

fn grid_shift(shift: f64, step: f64) -> Result<isize> {
    let k = (shift / step).round();
    if (shift - k * step).abs() > 1e-9 * step.max(shift.abs() * 1e-3) {
        return Err(Error::MisalignedShift { shift, step, nearest: k * step });
    }
    Ok(k as isize)
}

/// `π(g)h`: multiplication by the unitary phase followed by a grid
/// translation. Values translated out of the grid are dropped and reported
/// through [`RepResult::lost_mass`].
pub fn apply_rep(pi: &DualPoint, g: &GroupElement<f64>, h: &GridFunction) -> Result<RepResult> {
    if g.group() != pi.group {
        return Err(Error::GroupMismatch { left: pi.group, right: g.group() });
    }
    let x = g.coords();
    let step = h.step();
    let k = grid_shift(pi.shift(x), step)?;
    let n = h.len() as isize;
    let mut out = Vec::with_capacity(h.len());
    for j in 0..n {
        let src = j + k;
        let v = if (0..n).contains(&src) {
            h.values[src as usize] * Complex64::from_polar(1.0, pi.phase(x, h.u(j as usize)))
        } else {
            Complex64::new(0.0, 0.0)
        };
        out.push(v);
    }
    let dropped: Vec<Complex64> =
        (0..n).filter(|&src| !(0..n).contains(&(src - k))).map(|src| h.values[src as usize]).collect();
    let norm = h.l2_norm();
    let lost = if norm > 0.0 { (dropped.iter().map(|v| v.norm_sqr()).sum::<f64>() * step).sqrt() / norm } else { 0.0 };
    Ok(RepResult {
        function: GridFunction { half_width: h.half_width, values: out },
        lost_mass: lost,
        boundary_warning: lost > BOUNDARY_TOLERANCE,
    })
}

/// Moves `g` to the nearest element whose translation is a whole number of
/// grid steps, adjusting `x1` (or `x2` for Cartan points with `λ = 0`).
pub fn align_element(pi: &DualPoint, g: &GroupElement<f64>, step: f64) -> GroupElement<f64> {
    let mut x = g.coords().to_vec();
    let target = (pi.shift(&x) / step).round() * step;
    match pi.group {
        GroupId::Engel => x[0] = target,
        GroupId::Cartan => {
            let rho = pi.rho();
            if pi.lambda.abs() >= pi.mu.abs() {
                x[0] = (target * rho - pi.mu * x[1]) / pi.lambda;
            } else {
                x[1] = (target * rho - pi.lambda * x[0]) / pi.mu;
            }
        }
    }
    GroupElement::new(pi.group, x).expect("dimension preserved")
}

/// Nearest step to `t` for which `exp(±tX_i)` translates by whole grid steps.
pub fn aligned_step(pi: &DualPoint, i: usize, t: f64, grid_step: f64) -> Result<f64> {
    let unit = GroupElement::along_axis(pi.group, i, 1.0)?;
    let rate = pi.shift(unit.coords());
    if rate == 0.0 {
        return Ok(t);
    }
    let per_step = grid_step / rate.abs();
    Ok(((t / per_step).round().max(1.0)) * per_step)
}

/// First-order symbol `c0(u) + c1·d/du` of a vector field, held as a
/// one-variable differential operator with complex coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolTerm<T> {
    op: PolyDiffOp<Complex<T>>,
}

impl<T: Coeff> SymbolTerm<T> {
    pub fn operator(&self) -> &PolyDiffOp<Complex<T>> {
        &self.op
    }

    /// Polynomial multiplier `c0(u)`.
    pub fn multiplier(&self) -> Poly<Complex<T>> {
        self.op.coefficient(&[0])
    }

    /// Constant coefficient of `d/du`.
    pub fn derivative_coefficient(&self) -> Complex<T> {
        self.op.coefficient(&[1]).coeff(&[0])
    }
}

impl SymbolTerm<f64> {
    /// Applies `c0(u)h + c1 h'` on the grid.
    pub fn apply(&self, h: &GridFunction) -> GridFunction {
        let c0 = self.multiplier();
        let c1 = self.derivative_coefficient();
        let dh = if c1 == Complex64::new(0.0, 0.0) { None } else { Some(h.derivative()) };
        let values = (0..h.len())
            .map(|k| {
                let u = Complex64::new(h.u(k), 0.0);
                let mut v = c0.eval(&[u]) * h.values[k];
                if let Some(d) = &dh {
                    v += c1 * d[k];
                }
                v
            })
            .collect();
        GridFunction { half_width: h.half_width, values }
    }
}

fn ci<T: Coeff>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

/// Symbols of `X_1..X_n` for parameters in an arbitrary field.
pub fn symbol_terms<T: Coeff>(group: GroupId, lambda: T, mu: T, nu: T, i: usize) -> Result<SymbolTerm<T>> {
    let max = group.dimension();
    if i == 0 || i > max {
        return Err(Error::IndexOutOfRange { index: i, max });
    }
    let zero = T::zero;
    let two = T::one() + T::one();
    let u = Poly::<Complex<T>>::var(1, 0);
    let cst = |c: Complex<T>| Poly::constant(1, c);
    let mult = |p: Poly<Complex<T>>| PolyDiffOp::multiplication(p);
    let deriv = |c: Complex<T>| PolyDiffOp::term(vec![1], Poly::constant(1, c));
    let op = match group {
        GroupId::Engel => match i {
            1 => deriv(ci(T::one(), zero())),
            // i(−μ/(2λ) + λu²/2)
            2 => mult(
                &cst(ci(zero(), -(mu.clone() / (two.clone() * lambda.clone()))))
                    + &u.pow(2).scale(&ci(zero(), lambda.clone() / two.clone())),
            ),
            3 => mult(u.scale(&ci(zero(), -lambda))),
            _ => mult(cst(ci(zero(), lambda))),
        },
        GroupId::Cartan => {
            let rho = lambda.clone() * lambda.clone() + mu.clone() * mu.clone();
            match i {
                1 => {
                    let c0 = &cst(ci(zero(), -(nu.clone() * mu.clone()) / (two.clone() * rho.clone())))
                        + &u.pow(2).scale(&ci(zero(), -(rho.clone() * mu.clone()) / two.clone()));
                    &mult(c0) + &deriv(ci(lambda / rho, zero()))
                }
                2 => {
                    let c0 = &cst(ci(zero(), lambda.clone() * nu / (two.clone() * rho.clone())))
                        + &u.pow(2).scale(&ci(zero(), rho.clone() * lambda / two));
                    &mult(c0) + &deriv(ci(mu / rho, zero()))
                }
                3 => mult(u.scale(&ci(zero(), -rho))),
                4 => mult(cst(ci(zero(), lambda))),
                _ => mult(cst(ci(zero(), mu))),
            }
        }
    };
    Ok(SymbolTerm { op })
}

/// `π(X_i)` at a floating dual point.
pub fn symbol_vector_field(pi: &DualPoint, i: usize) -> Result<SymbolTerm<f64>> {
    symbol_terms(pi.group, pi.lambda, pi.mu, pi.nu, i)
}

/// `π(X_i)` with the dual point converted exactly to rationals.
pub fn symbol_vector_field_exact(pi: &DualPoint, i: usize) -> Result<SymbolTerm<BigRational>> {
    symbol_terms(pi.group, exact_from_f64(pi.lambda), exact_from_f64(pi.mu), exact_from_f64(pi.nu), i)
}

/// Closed form of the sub-Laplacian symbol `π(X1² + X2²)`:
/// Engel `d²/du² − ¼(λu² − μ/λ)²`, Cartan `ρ⁻¹d²/du² − (ρ²u² + ν)²/(4ρ)`.
pub fn sub_laplacian_symbol<T: Coeff>(group: GroupId, lambda: T, mu: T, nu: T) -> PolyDiffOp<Complex<T>> {
    let re = |x: T| Complex::new(x, T::zero());
    let u = Poly::<Complex<T>>::var(1, 0);
    let four = T::one() + T::one() + T::one() + T::one();
    match group {
        GroupId::Engel => {
            let inner = &u.pow(2).scale(&re(lambda.clone())) - &Poly::constant(1, re(mu / lambda));
            let pot = inner.pow(2).scale(&re(-(T::one() / four)));
            &PolyDiffOp::term(vec![2], Poly::one(1)) + &PolyDiffOp::multiplication(pot)
        }
        GroupId::Cartan => {
            let rho = lambda.clone() * lambda + mu.clone() * mu;
            let inner = &u.pow(2).scale(&re(rho.clone() * rho.clone())) + &Poly::constant(1, re(nu));
            let pot = inner.pow(2).scale(&re(-(T::one() / (four * rho.clone()))));
            &PolyDiffOp::term(vec![2], Poly::constant(1, re(T::one() / rho))) + &PolyDiffOp::multiplication(pot)
        }
    }
}

/// Exact check that `π(X1)² + π(X2)²` equals the closed-form sub-Laplacian
/// symbol at the rational image of `pi`.
pub fn sub_laplacian_identity_holds(pi: &DualPoint) -> Result<bool> {
    let x1 = symbol_vector_field_exact(pi, 1)?;
    let x2 = symbol_vector_field_exact(pi, 2)?;
    let lhs = &x1.op.compose(&x1.op) + &x2.op.compose(&x2.op);
    let rhs = sub_laplacian_symbol(pi.group, exact_from_f64(pi.lambda), exact_from_f64(pi.mu), exact_from_f64(pi.nu));
    Ok(lhs == rhs)
}

/// `‖[π(e^{tX_i})h − π(e^{−tX_i})h]/(2t) − π(X_i)h‖₂`.
pub fn infinitesimal_check(pi: &DualPoint, i: usize, h: &GridFunction, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("step must be positive, got {t}")));
    }
    let plus = apply_rep(pi, &GroupElement::along_axis(pi.group, i, t)?, h)?.function;
    let minus = apply_rep(pi, &GroupElement::along_axis(pi.group, i, -t)?, h)?.function;
    let exact = symbol_vector_field(pi, i)?.apply(h);
    let residual: Vec<Complex64> =
        plus.values.iter().zip(&minus.values).zip(&exact.values).map(|((p, m), e)| (p - m) / (2.0 * t) - e).collect();
    Ok(trapezoid_norm(&residual, h.step()))
}

/// Residuals of [`infinitesimal_check`] along a step sequence (each step
/// snapped to the grid) and the least-squares order of convergence.
#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub steps: Vec<f64>,
    pub residuals: Vec<f64>,
    pub order: f64,
}

pub fn infinitesimal_convergence(
    pi: &DualPoint,
    i: usize,
    h: &GridFunction,
    targets: &[f64],
) -> Result<ConvergenceReport> {
    let mut steps = Vec::with_capacity(targets.len());
    let mut residuals = Vec::with_capacity(targets.len());
    for &t in targets {
        let t = aligned_step(pi, i, t, h.step())?;
        steps.push(t);
        residuals.push(infinitesimal_check(pi, i, h, t)?);
    }
    let xs: Vec<f64> = steps.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = residuals.iter().map(|r| r.ln()).collect();
    let order = crate::fit::least_squares(&xs, &ys).0;
    Ok(ConvergenceReport { steps, residuals, order })
}
