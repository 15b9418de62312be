//! Casimir-Lifshitz force between two gyrotropic half-spaces.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod cli;
pub mod constants;
pub mod error;
pub mod force;
mod linalg;
pub mod materials;
pub mod modes;
pub mod quadrature;
pub mod reflection;

pub use constants::{PhysicalConstants, CODATA};
pub use error::{Error, Result};
