//! Differential operators with polynomial coefficients.
//!
//! Normal form: `Σ_α c_α(x) ∂^α` with derivatives to the right of their
//! coefficients, terms keyed by the multi-index `α`, zero coefficients
//! removed. Two operators are equal iff their term maps are equal.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::poly::{from_u32, Exponents, Poly};
use super::Coeff;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyDiffOp<T> {
    nvars: usize,
    terms: BTreeMap<Exponents, Poly<T>>,
}

impl<T: Coeff> PolyDiffOp<T> {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    /// Multiplication by the polynomial `p`.
    pub fn multiplication(p: Poly<T>) -> Self {
        let nvars = p.nvars();
        let mut op = Self::zero(nvars);
        op.add_term(vec![0; nvars], p);
        op
    }

    /// `∂/∂x_i` (0-based).
    pub fn partial(nvars: usize, i: usize) -> Self {
        let mut alpha = vec![0; nvars];
        alpha[i] = 1;
        Self::term(alpha, Poly::one(nvars))
    }

    /// The single term `c(x) ∂^alpha`.
    pub fn term(alpha: Exponents, c: Poly<T>) -> Self {
        let mut op = Self::zero(c.nvars());
        op.add_term(alpha, c);
        op
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Poly<T>)> {
        self.terms.iter()
    }

    /// Coefficient of `∂^alpha` (zero polynomial if absent).
    pub fn coefficient(&self, alpha: &[u32]) -> Poly<T> {
        self.terms.get(alpha).cloned().unwrap_or_else(|| Poly::zero(self.nvars))
    }

    /// Highest total derivative order; `None` for the zero operator.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|a| a.iter().sum()).max()
    }

    fn add_term(&mut self, alpha: Exponents, c: Poly<T>) {
        assert_eq!(c.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&alpha) {
            Some(existing) => {
                let sum = &existing + &c;
                if !sum.is_zero() {
                    self.terms.insert(alpha, sum);
                }
            }
            None => {
                self.terms.insert(alpha, c);
            }
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = Self::zero(self.nvars);
        for (a, p) in &self.terms {
            out.add_term(a.clone(), p.scale(c));
        }
        out
    }

    /// Applies the operator to a polynomial.
    pub fn apply(&self, f: &Poly<T>) -> Poly<T> {
        let mut out = Poly::zero(self.nvars);
        for (a, c) in &self.terms {
            let d = f.derivative_multi(a);
            if !d.is_zero() {
                out = &out + &(c * &d);
            }
        }
        out
    }

    /// Composition `self ∘ rhs`, normalised by the Leibniz rule:
    /// `∂^α (q ∂^β) = Σ_{γ≤α} C(α,γ) (∂^γ q) ∂^{α−γ+β}`.
    pub fn compose(&self, rhs: &Self) -> Self {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = Self::zero(self.nvars);
        for (alpha, p) in &self.terms {
            for (beta, q) in &rhs.terms {
                for gamma in sub_multi_indices(alpha) {
                    let dq = q.derivative_multi(&gamma);
                    if dq.is_zero() {
                        continue;
                    }
                    let binom =
                        alpha.iter().zip(&gamma).fold(T::one(), |acc, (&a, &g)| acc * from_u32::<T>(binomial(a, g)));
                    let deriv: Exponents = alpha.iter().zip(&gamma).zip(beta).map(|((a, g), b)| a - g + b).collect();
                    out.add_term(deriv, (p * &dq).scale(&binom));
                }
            }
        }
        out
    }

    /// `[self, rhs] = self∘rhs − rhs∘self`.
    pub fn commutator(&self, rhs: &Self) -> Self {
        &self.compose(rhs) - &rhs.compose(self)
    }

    /// Substitutes the coordinates inside every coefficient.
    pub fn map_coefficients(&self, f: impl Fn(&Poly<T>) -> Poly<T>) -> Self {
        let mut out = Self::zero(self.nvars);
        for (a, c) in &self.terms {
            out.add_term(a.clone(), f(c));
        }
        out
    }
}

/// Free-function form of [`PolyDiffOp::commutator`].
pub fn commutator<T: Coeff>(a: &PolyDiffOp<T>, b: &PolyDiffOp<T>) -> PolyDiffOp<T> {
    a.commutator(b)
}

fn sub_multi_indices(alpha: &[u32]) -> Vec<Exponents> {
    let mut out = vec![Vec::with_capacity(alpha.len())];
    for &a in alpha {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=a).map(move |g| {
                    let mut v = prefix.clone();
                    v.push(g);
                    v
                })
            })
            .collect();
    }
    out
}

fn binomial(n: u32, k: u32) -> u32 {
    (0..k).fold(1u64, |acc, i| acc * u64::from(n - i) / u64::from(i + 1)) as u32
}

impl<T: Coeff> Add for &PolyDiffOp<T> {
    type Output = PolyDiffOp<T>;
    fn add(self, rhs: &PolyDiffOp<T>) -> PolyDiffOp<T> {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (a, c) in &rhs.terms {
            out.add_term(a.clone(), c.clone());
        }
        out
    }
}

impl<T: Coeff> Sub for &PolyDiffOp<T> {
    type Output = PolyDiffOp<T>;
    fn sub(self, rhs: &PolyDiffOp<T>) -> PolyDiffOp<T> {
        self + &(-rhs)
    }
}

impl<T: Coeff> Neg for &PolyDiffOp<T> {
    type Output = PolyDiffOp<T>;
    fn neg(self) -> PolyDiffOp<T> {
        self.map_coefficients(|c| -c)
    }
}

impl<T: Coeff> Mul for &PolyDiffOp<T> {
    type Output = PolyDiffOp<T>;
    fn mul(self, rhs: &PolyDiffOp<T>) -> PolyDiffOp<T> {
        self.compose(rhs)
    }
}

impl<T: Coeff + fmt::Display> fmt::Display for PolyDiffOp<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (a, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "[{c}]")?;
            for (i, &k) in a.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "∂{}", i + 1)?,
                    _ => write!(f, "∂{}^{}", i + 1, k)?,
                }
            }
        }
        Ok(())
    }
}
