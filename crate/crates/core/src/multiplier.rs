//! Right-hand side of the `L^p → L^q` multiplier bound
//! `‖φ(L)‖ ≲ sup_{s>0} φ(s)·τ(E_(0,s))^{1/p − 1/q}` with `τ ≈ s^e`,
//! `e = 3` (Engel) or `9/2` (Cartan). Every value is a bound modulo the
//! theorem's unspecified constant.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fit::GrowthFit;
use crate::group::GroupId;

/// Tolerance used when comparing `a − b` with `e/r`.
pub const EXPONENT_TOLERANCE: f64 = 1e-12;

const SCAN_STEP: f64 = 0.5 * std::f64::consts::LN_10;
const SCAN_LO: f64 = -8.0 * std::f64::consts::LN_10;
const SCAN_HI: f64 = 8.0 * std::f64::consts::LN_10;
const LN_LIMIT: f64 = 690.0;

/// `τ(E_(0,s)) ≲ s^e`.
pub fn trace_exponent(group: GroupId) -> f64 {
    match group {
        GroupId::Engel => 3.0,
        GroupId::Cartan => 4.5,
    }
}

/// `1 < p ≤ 2 ≤ q < ∞`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExponentPair {
    pub p: f64,
    pub q: f64,
}

impl ExponentPair {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p > 1.0 && p <= 2.0 && q >= 2.0 && q.is_finite()) {
            return Err(Error::InvalidExponentPair { p, q });
        }
        Ok(Self { p, q })
    }

    /// `1/r = 1/p − 1/q ∈ [0, 1)`.
    pub fn inv_r(&self) -> f64 {
        1.0 / self.p - 1.0 / self.q
    }
}

/// Spectral multiplier profile with `φ(0) = 1`, non-increasing.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PhiFunction {
    /// `(1 + s)^{−exponent}`.
    Power { exponent: f64 },
    /// `e^{−ts}`.
    Heat { t: f64 },
    /// Table on a log grid, see [`CustomPhi`].
    Custom(CustomPhi),
}

/// Values `φ(s_k)` on an increasing positive grid. Between nodes `φ` is
/// linear in `ln s`; below the first node it is linear in `s` from
/// `φ(0) = 1`; beyond the last node it continues as the power law through
/// the last two nodes (or stays 0 if the table reaches 0).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CustomPhi {
    s: Vec<f64>,
    values: Vec<f64>,
}

impl CustomPhi {
    pub fn new(s: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if s.len() != values.len() || s.len() < 2 {
            return Err(Error::InvalidPhi("table needs at least two (s, value) rows".into()));
        }
        if !(s[0] > 0.0) || s.windows(2).any(|w| !(w[1] > w[0])) || s.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidPhi("s must be positive, finite and strictly increasing".into()));
        }
        if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::InvalidPhi("values must lie in [0, 1]".into()));
        }
        if values.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::InvalidPhi("values must be non-increasing".into()));
        }
        let phi = Self { s, values };
        if phi.tail_slope().is_some_and(|k| k >= 0.0) {
            return Err(Error::InvalidPhi("table must decay to 0: the last two values are equal".into()));
        }
        Ok(phi)
    }

    /// Log–log slope of the tail, `None` if the table ends at 0.
    fn tail_slope(&self) -> Option<f64> {
        let n = self.s.len();
        let (v0, v1) = (self.values[n - 2], self.values[n - 1]);
        if v1 == 0.0 {
            return None;
        }
        Some((v1 / v0).ln() / (self.s[n - 1] / self.s[n - 2]).ln())
    }

    fn eval(&self, s: f64) -> f64 {
        let n = self.s.len();
        if s <= self.s[0] {
            return 1.0 + (self.values[0] - 1.0) * s / self.s[0];
        }
        if s >= self.s[n - 1] {
            return match self.tail_slope() {
                None => 0.0,
                Some(k) => self.values[n - 1] * (s / self.s[n - 1]).powf(k),
            };
        }
        let j = self.s.partition_point(|&x| x <= s) - 1;
        let t = (s / self.s[j]).ln() / (self.s[j + 1] / self.s[j]).ln();
        self.values[j] + t * (self.values[j + 1] - self.values[j])
    }
}

impl PhiFunction {
    pub fn power(exponent: f64) -> Result<Self> {
        if !(exponent >= 0.0 && exponent.is_finite()) {
            return Err(Error::InvalidPhi(format!("power exponent a - b must be >= 0, got {exponent}")));
        }
        Ok(PhiFunction::Power { exponent })
    }

    pub fn heat(t: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidPhi(format!("heat time must be positive, got {t}")));
        }
        Ok(PhiFunction::Heat { t })
    }

    pub fn eval(&self, s: f64) -> f64 {
        match self {
            PhiFunction::Power { exponent } => (1.0 + s).powf(-exponent),
            PhiFunction::Heat { t } => (-t * s).exp(),
            PhiFunction::Custom(c) => c.eval(s),
        }
    }

    /// `ln φ(s)` without underflow for the built-in families.
    fn ln_eval(&self, s: f64) -> f64 {
        match self {
            PhiFunction::Power { exponent } => -exponent * s.ln_1p(),
            PhiFunction::Heat { t } => -t * s,
            PhiFunction::Custom(c) => c.eval(s).ln(),
        }
    }

    /// `k` with `φ(s) ~ C·s^k` as `s → ∞`; `None` when `φ` decays faster
    /// than every power.
    fn tail(&self) -> Option<(f64, f64)> {
        match self {
            PhiFunction::Power { exponent } => Some((-exponent, 1.0)),
            PhiFunction::Heat { .. } => None,
            PhiFunction::Custom(c) => c.tail_slope().map(|k| {
                let n = c.s.len();
                (k, c.values[n - 1] * c.s[n - 1].powf(-k))
            }),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            PhiFunction::Power { exponent } => format!("power(a-b={exponent})"),
            PhiFunction::Heat { t } => format!("heat(t={t})"),
            PhiFunction::Custom(c) => format!("custom({} rows)", c.s.len()),
        }
    }
}

/// Closed-form `sup_{s>0} φ(s)·s^k`, `None` for custom tables.
pub fn closed_form_sup(phi: &PhiFunction, k: f64) -> Option<f64> {
    match *phi {
        _ if k == 0.0 => Some(1.0),
        PhiFunction::Power { exponent: a } => Some(if a > k + EXPONENT_TOLERANCE {
            // attained at s* = k/(a − k)
            k.powf(k) * (a - k).powf(a - k) / a.powf(a)
        } else if a >= k - EXPONENT_TOLERANCE {
            1.0
        } else {
            f64::INFINITY
        }),
        // attained at s* = k/t
        PhiFunction::Heat { t } => Some((k / t).powf(k) * (-k).exp()),
        PhiFunction::Custom(_) => None,
    }
}

/// Numerical supremum of `φ(s)·s^k` over `s > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SupSearch {
    pub value: f64,
    /// Maximiser; `None` when the supremum is a limit at 0 or ∞.
    pub argmax: Option<f64>,
    pub finite: bool,
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-10 * (1.0 + a.abs().max(b.abs())) {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Half-decade scan of `ln φ(s) + k ln s` on `ln s ∈ [ln 10⁻⁸, ln 10⁸]`
/// (widened while the maximum sits on an edge), then golden-section
/// refinement around the best scan point.
pub fn search_sup(phi: &PhiFunction, k: f64) -> SupSearch {
    if k == 0.0 {
        return SupSearch { value: 1.0, argmax: None, finite: true };
    }
    let tail = phi.tail();
    let mut at_infinity = None;
    if let Some((slope, coeff)) = tail {
        if slope + k > EXPONENT_TOLERANCE {
            return SupSearch { value: f64::INFINITY, argmax: None, finite: false };
        }
        if slope + k >= -EXPONENT_TOLERANCE {
            at_infinity = Some(coeff);
        }
    }
    let g = |x: f64| phi.ln_eval(x.exp()) + k * x;
    let (mut lo, mut hi) = (SCAN_LO, SCAN_HI);
    loop {
        let steps = ((hi - lo) / SCAN_STEP).round() as usize;
        let xs: Vec<f64> = (0..=steps).map(|j| lo + j as f64 * SCAN_STEP).collect();
        let (best, _) = xs.iter().enumerate().fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &x)| {
            let v = g(x);
            if v > bv {
                (i, v)
            } else {
                (bi, bv)
            }
        });
        if best == 0 && lo > -LN_LIMIT {
            lo = (lo - 8.0 * SCAN_STEP * 2.0).max(-LN_LIMIT);
            continue;
        }
        if best == steps && hi < LN_LIMIT && at_infinity.is_none() {
            hi = (hi + 8.0 * SCAN_STEP * 2.0).min(LN_LIMIT);
            continue;
        }
        let a = xs[best.saturating_sub(1)];
        let b = xs[(best + 1).min(steps)];
        let x = golden_max(g, a, b);
        let value = g(x).exp();
        return match at_infinity {
            Some(limit) if limit >= value => SupSearch { value: limit, argmax: None, finite: true },
            _ => SupSearch { value, argmax: Some(x.exp()), finite: true },
        };
    }
}

/// `sup_{s>0} φ(s)·s^{e/r}` with the closed form (when there is one) and
/// its agreement with the numerical search.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SupBound {
    pub group: GroupId,
    pub p: f64,
    pub q: f64,
    pub phi: String,
    pub sup: f64,
    pub finite: bool,
    pub closed_form: Option<f64>,
    pub numeric: f64,
    pub argmax: Option<f64>,
    /// `|numeric − closed_form| / closed_form`.
    pub rel_err: Option<f64>,
}

fn relative_error(numeric: f64, exact: f64) -> f64 {
    if numeric == exact {
        0.0
    } else {
        (numeric - exact).abs() / exact.abs()
    }
}

pub fn sup_bound(phi: &PhiFunction, group: GroupId, pq: &ExponentPair) -> SupBound {
    let k = trace_exponent(group) * pq.inv_r();
    let search = search_sup(phi, k);
    let closed = closed_form_sup(phi, k);
    let sup = closed.unwrap_or(search.value);
    SupBound {
        group,
        p: pq.p,
        q: pq.q,
        phi: phi.describe(),
        sup,
        finite: sup.is_finite(),
        closed_form: closed,
        numeric: search.value,
        argmax: search.argmax,
        rel_err: closed.filter(|c| c.is_finite()).map(|c| relative_error(search.value, c)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SobolevCheck {
    pub holds: bool,
    /// `a − b − e/r`.
    pub margin: f64,
}

/// `a − b ≥ e/r`; `b = 0` is the Sobolev embedding condition `a ≥ e/r`.
pub fn sobolev_check(group: GroupId, a: f64, b: f64, pq: &ExponentPair) -> SobolevCheck {
    let margin = a - b - trace_exponent(group) * pq.inv_r();
    SobolevCheck { holds: margin >= -EXPONENT_TOLERANCE, margin }
}

/// `sup_s e^{−ts} s^{e/r} = C·t^{−β}` with `β = e/r`, `C = β^β e^{−β}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HeatDecay {
    pub constant: f64,
    pub exponent: f64,
    /// `C·t^{−β}` at the requested `t`.
    pub bound: f64,
    /// Numerical supremum at the requested `t`.
    pub numeric: f64,
    pub rel_err: f64,
}

pub fn heat_decay(group: GroupId, pq: &ExponentPair, t: f64) -> Result<HeatDecay> {
    let phi = PhiFunction::heat(t)?;
    let beta = trace_exponent(group) * pq.inv_r();
    let constant = beta.powf(beta) * (-beta).exp();
    let bound = constant * t.powf(-beta);
    let numeric = search_sup(&phi, beta).value;
    Ok(HeatDecay { constant, exponent: beta, bound, numeric, rel_err: relative_error(numeric, bound) })
}

/// `sup_s φ(s)·τ̂(s)^{1/r}` with the fitted trace `τ̂(s) = e^b s^m`, i.e.
/// `e^{b/r}·sup_s φ(s) s^{m/r}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EndToEnd {
    pub value: f64,
    pub finite: bool,
    /// `m/r`, the exponent replacing `e/r`.
    pub exponent: f64,
    pub prefactor: f64,
}

pub fn end_to_end_bound(phi: &PhiFunction, pq: &ExponentPair, fit: Option<&GrowthFit>) -> Result<EndToEnd> {
    let fit = fit.ok_or(Error::MissingFit)?;
    let inv_r = pq.inv_r();
    let exponent = fit.slope * inv_r;
    let prefactor = (fit.intercept * inv_r).exp();
    if exponent < 0.0 {
        return Err(Error::InvalidArgument(format!("fitted trace slope must be non-negative, got {}", fit.slope)));
    }
    let sup = closed_form_sup(phi, exponent).unwrap_or_else(|| search_sup(phi, exponent).value);
    let value = prefactor * sup;
    Ok(EndToEnd { value, finite: value.is_finite(), exponent, prefactor })
}
