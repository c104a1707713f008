use serde::Serialize;

use super::SchrodingerOp;
use crate::error::{Error, Result};

/// Symmetric tridiagonal matrix, optionally carrying the grid it was
/// discretised on.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TridiagSystem {
    diagonal: Vec<f64>,
    off_diagonal: Vec<f64>,
    half_width: Option<f64>,
}

impl TridiagSystem {
    pub fn new(diagonal: Vec<f64>, off_diagonal: Vec<f64>) -> Result<Self> {
        if diagonal.is_empty() || off_diagonal.len() + 1 != diagonal.len() {
            return Err(Error::InvalidGrid(format!(
                "need n >= 1 diagonal and n-1 off-diagonal entries, got {} and {}",
                diagonal.len(),
                off_diagonal.len()
            )));
        }
        Ok(Self { diagonal, off_diagonal, half_width: None })
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn off_diagonal(&self) -> &[f64] {
        &self.off_diagonal
    }

    pub fn len(&self) -> usize {
        self.diagonal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diagonal.is_empty()
    }

    pub fn half_width(&self) -> Option<f64> {
        self.half_width
    }

    pub fn step(&self) -> Option<f64> {
        self.half_width.map(|l| 2.0 * l / (self.len() - 1) as f64)
    }

    /// Gershgorin interval containing the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off_diagonal[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.off_diagonal[i].abs() } else { 0.0 };
            lo = lo.min(self.diagonal[i] - r);
            hi = hi.max(self.diagonal[i] + r);
        }
        (lo, hi)
    }
}

/// Central second differences on `u_k = −L + k·h`, `h = 2L/(n−1)`, with
/// Dirichlet conditions beyond both ends.
pub fn discretize(op: &SchrodingerOp, half_width: f64, n: usize) -> Result<TridiagSystem> {
    if !(half_width > 0.0 && half_width.is_finite()) || n < 3 {
        return Err(Error::InvalidGrid(format!("need L > 0 and n >= 3, got L = {half_width}, n = {n}")));
    }
    let h = 2.0 * half_width / (n - 1) as f64;
    let a = op.kinetic() / (h * h);
    let diagonal = (0..n).map(|k| 2.0 * a + op.potential().eval(-half_width + k as f64 * h)).collect();
    Ok(TridiagSystem { diagonal, off_diagonal: vec![-a; n - 1], half_width: Some(half_width) })
}

/// Number of eigenvalues strictly below `s`: the count of negative pivots in
/// `T − sI = LDLᵀ`. Pivots smaller than `pivmin` are replaced by `+pivmin`.
pub fn sturm_count(t: &TridiagSystem, s: f64) -> usize {
    let max_e2 = t.off_diagonal.iter().fold(1.0f64, |m, e| m.max(e * e));
    let pivmin = f64::MIN_POSITIVE * max_e2;
    let mut count = 0;
    let mut q = t.diagonal[0] - s;
    for i in 0.. {
        if q.abs() < pivmin {
            q = pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
        if i + 1 == t.len() {
            break;
        }
        let e = t.off_diagonal[i];
        q = t.diagonal[i + 1] - s - e * e / q;
    }
    count
}

/// All eigenvalues below `s`, each located by bisection on the count
/// function to an interval of width at most `tol`; ascending.
pub fn eigenvalues_below(t: &TridiagSystem, s: f64, tol: f64) -> Result<Vec<f64>> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tol must be positive, got {tol}")));
    }
    let total = sturm_count(t, s);
    let mut out = Vec::with_capacity(total);
    if total == 0 {
        return Ok(out);
    }
    let (lo, _) = t.gershgorin();
    let lo = lo - tol;
    // stack of (a, b, count(a), count(b)) with count(a) < count(b)
    let mut stack = vec![(lo, s, 0usize, total)];
    while let Some((a, b, ca, cb)) = stack.pop() {
        let m = 0.5 * (a + b);
        if b - a <= tol || m <= a || m >= b {
            out.extend(std::iter::repeat_n(m, cb - ca));
            continue;
        }
        let cm = sturm_count(t, m);
        // push the upper half first so the lower half is refined first
        if cm < cb {
            stack.push((m, b, cm, cb));
        }
        if ca < cm {
            stack.push((a, m, ca, cm));
        }
    }
    Ok(out)
}
