//! Exact-arithmetic laboratory for the dynamics of rational self-maps of
//! projective space: degree sequences, dynamical degrees, Weil heights,
//! arithmetic degrees of orbits, and an orbit-density criterion for
//! birational monomial maps.
//!
//! All core arithmetic is exact (big integers and rationals); floating point
//! appears only in final logarithms and in certified interval endpoints.

pub mod algebra;
pub mod degrees;
pub mod heights;
pub mod maps;
pub mod orbits;
pub mod sampling;

pub use algebra::{IntMatrix, MultiPoly, SpectralInterval};
pub use maps::{MapDescription, MapInstance, MonomialMap, ProjPointQ, RationalMapPn};
pub use orbits::{AlphaEstimate, OrbitRecord, OrbitStatus};
