//! Symmetry integrals of arithmetic functions in short intervals.
//!
//! For `f = g * 1` (Dirichlet convolution with the constant-one function) the
//! symmetry integral
//!
//! ```text
//! I_f(N, h) = sum_{N < x <= 2N} | sum'_{|n - x| <= h} sgn(n - x) f(n) |^2
//! ```
//!
//! is computed three ways: from prefix sums of `f` ([`symmetry`]), from the
//! short-interval divisibility indicators `chi_q` ([`chi`]), and from the
//! diagonal / off-diagonal spectral expansion over pairs of reduced fractions
//! ([`spectral`]). [`scaling`] runs parameter grids and fits log-log slopes.

pub mod chi;
pub mod error;
pub mod io;
pub mod phase;
pub mod scaling;
pub mod spectral;
pub mod symmetry;
pub mod tables;

pub use error::{Error, Result};
pub use phase::RationalPhase;
pub use symmetry::{SymmetrySeries, WindowParams};
pub use tables::{FunctionTable, GeneratorSpec, StandardFunction};
