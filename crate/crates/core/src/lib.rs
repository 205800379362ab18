//! Numerical laboratory for the quantum annulus, conservative hyperbolae and
//! the quantum cross.
//!
//! The crate builds the two-by-two block minidilation `(Ẑ, Ŵ)` of a pair on a
//! quantum hyperbola, checks its five defining properties, verifies the
//! operator identity behind the estimate `K(r) ≤ 2[1 + 2r²/(r⁴ − 1)]`, and
//! searches for lower-bound witnesses of the spectral constant `K(r)`.
//!
//! All operators are finite dense complex matrices ([`CMatrix`]); functions
//! are Laurent polynomials ([`laurent::LaurentPoly`]) or their hyperbola
//! split ([`laurent::HyperbolaFunction`]).

pub mod calculus;
pub mod dilation;
pub mod domains;
mod error;
pub mod estimate;
pub mod laurent;
pub mod numkernel;
mod radius;
pub mod search;
pub mod seeds;
pub mod tolerances;

pub use error::{Error, Result};
pub use numkernel::{CMatrix, C64};
pub use radius::Radius;
