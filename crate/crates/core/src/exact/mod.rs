//! Exact scalars, dense matrices, characteristic polynomials and permutations.

mod matrix;
mod permutation;
mod poly;
mod rational;
mod spectral;

pub use matrix::{Block, Matrix};
pub use permutation::{permute_similarity, Permutation};
pub use poly::{char_poly, is_nilpotent, root_multiplicity, CharPoly};
pub use rational::Rational;
pub use spectral::{spectral_radius_estimate, SpectralRadiusEstimate};
