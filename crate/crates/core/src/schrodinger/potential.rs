use serde::Serialize;

use crate::error::{Error, Result};

/// Even polynomial potential `V(u) = Σ_k c_k u^{2k}`.
///
/// The top coefficient is positive, so `V → +∞` as `|u| → ∞` and every
/// sub-level set is bounded.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Potential {
    even_coeffs: Vec<f64>,
}

impl Potential {
    /// `even_coeffs[k]` multiplies `u^{2k}`. Trailing zeros are trimmed.
    pub fn new(mut even_coeffs: Vec<f64>) -> Result<Self> {
        if even_coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidPotential("coefficients must be finite".into()));
        }
        while even_coeffs.last() == Some(&0.0) {
            even_coeffs.pop();
        }
        match even_coeffs.last() {
            Some(&c) if even_coeffs.len() >= 2 && c > 0.0 => Ok(Self { even_coeffs }),
            _ => Err(Error::InvalidPotential("leading coefficient must be positive and of degree >= 2 in u".into())),
        }
    }

    pub fn even_coeffs(&self) -> &[f64] {
        &self.even_coeffs
    }

    /// Polynomial degree in `u`.
    pub fn degree(&self) -> usize {
        2 * (self.even_coeffs.len() - 1)
    }

    pub fn eval(&self, u: f64) -> f64 {
        let w = u * u;
        self.even_coeffs.iter().rev().fold(0.0, |acc, c| acc * w + c)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { even_coeffs: self.even_coeffs.iter().map(|c| c * factor).collect() }
    }

    /// `w_max` such that `Σ_k c_k w^k > level` for every `w = u² > w_max`
    /// (Cauchy bound on the positive roots of `V − level` as a polynomial
    /// in `w`).
    fn level_bound_w(&self, level: f64) -> f64 {
        let d = self.even_coeffs.len() - 1;
        let lead = self.even_coeffs[d];
        let mut worst: f64 = (self.even_coeffs[0] - level).abs();
        for c in &self.even_coeffs[1..d] {
            worst = worst.max(c.abs());
        }
        1.0 + worst / lead
    }

    /// Radius beyond which `V(u) > level`.
    pub fn level_radius(&self, level: f64) -> f64 {
        self.level_bound_w(level).sqrt()
    }

    /// Global minimum `(u*, V(u*))` with `u* ≥ 0`.
    pub fn minimum(&self) -> (f64, f64) {
        let v0 = self.even_coeffs[0];
        let radius = self.level_radius(v0);
        const SAMPLES: usize = 2048;
        let du = radius / SAMPLES as f64;
        let (mut best_k, mut best) = (0usize, v0);
        for k in 1..=SAMPLES {
            let v = self.eval(k as f64 * du);
            if v < best {
                best = v;
                best_k = k;
            }
        }
        let lo = (best_k as f64 - 1.0).max(0.0) * du;
        let hi = (best_k as f64 + 1.0) * du;
        let u = golden_section_min(|u| self.eval(u), lo, hi, 1e-14 * radius.max(1.0));
        let v = self.eval(u);
        if v < best {
            (u, v)
        } else {
            (best_k as f64 * du, best)
        }
    }

    /// Smallest `L ≥ 0` with `V(u) ≥ level` for all `|u| ≥ L`.
    pub fn outer_crossing(&self, level: f64) -> f64 {
        let radius = self.level_radius(level);
        const SAMPLES: usize = 4096;
        let du = radius / SAMPLES as f64;
        let last_below = (0..=SAMPLES).rev().find(|&k| self.eval(k as f64 * du) < level);
        match last_below {
            None => 0.0,
            Some(k) => {
                let (mut a, mut b) = (k as f64 * du, (k + 1) as f64 * du);
                while b - a > 1e-13 * b.max(1.0) {
                    let m = 0.5 * (a + b);
                    if self.eval(m) < level {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                b
            }
        }
    }
}

pub(crate) fn golden_section_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        if fc < fd {
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

/// Multiplies two polynomials given by coefficient vectors.
pub(crate) fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub(crate) fn poly_pow(a: &[f64], k: u32) -> Vec<f64> {
    (0..k).fold(vec![1.0], |acc, _| poly_mul(&acc, a))
}

pub(crate) fn poly_add(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] += y;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_coercive() {
        assert!(Potential::new(vec![1.0]).is_err());
        assert!(Potential::new(vec![0.0, -1.0]).is_err());
        assert!(Potential::new(vec![0.0, 1.0, 0.0]).is_ok());
    }

    #[test]
    fn double_well_minimum() {
        // (u² − 2)²/4 + u² + 2 = u⁴/4 + 3 : minimum at 0
        let v = Potential::new(vec![3.0, 0.0, 0.25]).unwrap();
        let (u, m) = v.minimum();
        assert!(u.abs() < 1e-6 && (m - 3.0).abs() < 1e-12);
        // u⁴ − 4u² : minimum −4 at u = √2
        let w = Potential::new(vec![0.0, -4.0, 1.0]).unwrap();
        let (u, m) = w.minimum();
        assert!((u - 2f64.sqrt()).abs() < 1e-6, "{u}");
        assert!((m + 4.0).abs() < 1e-12);
    }

    #[test]
    fn outer_crossing_of_harmonic() {
        let v = Potential::new(vec![0.0, 1.0]).unwrap();
        assert!((v.outer_crossing(400.0) - 20.0).abs() < 1e-10);
    }
}
