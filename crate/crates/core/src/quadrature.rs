//! Gauss–Legendre rules and adaptive integration.

/// `n`-point Gauss–Legendre rule on `[−1, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes are the roots of `P_n`, located by Newton iteration from the
    /// Chebyshev-like initial guesses `cos(π(k − ¼)/(n + ½))`; ascending.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss–Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for k in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[k] = -x;
            nodes[n - 1 - k] = x;
            weights[k] = w;
            weights[n - 1 - k] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn on(&self, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
        let (c, r) = (0.5 * (a + b), 0.5 * (b - a));
        (self.nodes.iter().map(|x| c + r * x).collect(), self.weights.iter().map(|w| r * w).collect())
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        let (c, r) = (0.5 * (a + b), 0.5 * (b - a));
        r * self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(c + r * x)).sum::<f64>()
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Result of [`adaptive`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

const ADAPTIVE_ORDER: usize = 20;
const MAX_DEPTH: u32 = 40;

/// Adaptive bisection driven by the difference between one rule on an
/// interval and the same rule on its two halves.
pub fn adaptive(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> Integral {
    let rule = GaussLegendre::new(ADAPTIVE_ORDER);
    let whole = rule.integrate(&f, a, b);
    let mut out = Integral { value: 0.0, error: 0.0, evaluations: ADAPTIVE_ORDER };
    let tol = rel_tol * whole.abs().max(f64::MIN_POSITIVE);
    refine(&rule, &f, a, b, whole, tol, 0, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn refine(
    rule: &GaussLegendre,
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    out: &mut Integral,
) {
    let m = 0.5 * (a + b);
    let left = rule.integrate(f, a, m);
    let right = rule.integrate(f, m, b);
    out.evaluations += 2 * rule.len();
    let err = (left + right - whole).abs();
    if err <= tol || depth >= MAX_DEPTH {
        out.value += left + right;
        out.error += err;
        return;
    }
    refine(rule, f, a, m, left, 0.5 * tol, depth + 1, out);
    refine(rule, f, m, b, right, 0.5 * tol, depth + 1, out);
}
