//! Exact polynomial and differential-operator algebra.

mod diffop;
mod poly;

pub use diffop::{commutator, PolyDiffOp};
pub use poly::{Exponents, Poly};

use num_bigint::BigInt;
use num_rational::BigRational;
use std::fmt::Debug;
use std::ops::Neg;

/// Coefficient ring for [`Poly`] and [`PolyDiffOp`].
pub trait Coeff: Clone + PartialEq + Debug + num_traits::Num + Neg<Output = Self> {}

impl<T> Coeff for T where T: Clone + PartialEq + Debug + num_traits::Num + Neg<Output = T> {}

/// Exact rational `n/d`.
pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Converts a finite double to the rational it represents exactly.
pub fn exact_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite double")
}
