//! Verification kernels for the E₆⁽¹⁾ discrete Painlevé dynamics of the
//! semiclassical Laguerre recurrence.

pub mod dynamics;
pub mod error;
pub mod lattice;
pub mod orthopoly;
pub mod sampling;
pub mod scalars;
pub mod weyl;

pub use error::{Error, Result};
