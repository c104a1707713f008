//! Spectral estimates for non-Rockland operators on the Engel and Cartan
//! groups: exact group algebra, Dixmier representations, anharmonic
//! oscillator symbols, eigenvalue counting, phase-space volumes, dual-space
//! trace integrals and spectral multiplier bounds.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod dual_trace;
pub mod error;
pub mod fit;
pub mod group;
pub mod multiplier;
pub mod quadrature;
pub mod representation;
pub mod schrodinger;
pub mod weyl;

pub use error::{Error, Result};
pub use group::{GroupElement, GroupId};
