//! Exact arithmetic substrate: sparse multivariate integer polynomials,
//! big-integer matrices with exterior powers, and certified spectral-radius
//! intervals.

pub mod matrix;
pub mod parse;
pub mod poly;
pub mod spectral;
mod unipoly;

pub use matrix::IntMatrix;
pub use parse::{parse_poly, ParseError};
pub use poly::{Monomial, MultiPoly, PolyError};
pub use spectral::{spectral_radius, SpectralInterval};
