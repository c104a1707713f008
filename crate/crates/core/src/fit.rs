//! Log–log least-squares fits of power-law growth.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordinary least squares `y ≈ slope·x + intercept`; returns
/// `(slope, intercept, rms_residual)`.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum();
    (slope, intercept, (rss / n).sqrt())
}

/// Power-law fit `value ≈ exp(intercept)·s^slope` on natural-log scale.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub s_grid: Vec<f64>,
    pub values: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    /// RMS deviation of `ln value` from the fitted line.
    pub residual: f64,
}

impl GrowthFit {
    pub fn fit(s_grid: &[f64], values: &[f64]) -> Result<Self> {
        if s_grid.len() != values.len() || s_grid.len() < 2 {
            return Err(Error::InvalidSGrid(format!(
                "need matching grids with at least 2 points, got {} and {}",
                s_grid.len(),
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidArgument(format!("growth fit needs positive finite values, got {v}")));
        }
        let xs: Vec<f64> = s_grid.iter().map(|s| s.ln()).collect();
        let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
        let (slope, intercept, residual) = least_squares(&xs, &ys);
        Ok(Self { s_grid: s_grid.to_vec(), values: values.to_vec(), slope, intercept, residual })
    }

    /// Fitted value `exp(intercept)·s^slope`.
    pub fn predict(&self, s: f64) -> f64 {
        (self.intercept + self.slope * s.ln()).exp()
    }
}

/// Geometric grid of `count` points from `start` to `end` inclusive.
pub fn geometric_grid(start: f64, end: f64, count: usize) -> Result<Vec<f64>> {
    if !(start > 0.0 && end > start) || count < 2 {
        return Err(Error::InvalidSGrid(format!("need 0 < start < end and count >= 2, got {start}:{end}:{count}")));
    }
    let ratio = (end / start).ln() / (count - 1) as f64;
    Ok((0..count).map(|k| if k + 1 == count { end } else { start * (ratio * k as f64).exp() }).collect())
}
