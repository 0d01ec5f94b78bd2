//! Casimir energies, free energies and forces between perfect conductors.
//!
//! Everything inside works in ħ = c = k_B = 1 with lengths in metres; the
//! `units` module converts at the edges.

// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod density;
pub mod derjaguin;
pub mod error;
pub mod geometry;
pub mod plates;
pub mod quad;
pub mod scattering;
pub mod specialfn;
pub mod units;

pub use error::{CasimirError, Result};
pub use units::PhysicalScale;
