//! Exact analysis of ideal-triangularizability for nonnegative matrices and
//! finitely generated matrix semigroups.
//!
//! Everything that decides a verdict runs in exact rational arithmetic. The one
//! floating-point quantity, [`exact::spectral_radius_estimate`], is for reports only.

pub mod diagonal;
pub mod error;
pub mod exact;
pub mod fixtures;
pub mod generate;
pub mod idempotent;
pub mod lattice;
pub mod semigroup;
pub mod triangular;

pub use error::{Error, Result};
pub use exact::{CharPoly, Matrix, Permutation, Rational};
