//! Exact-arithmetic kernel for the two-boundary Temperley-Lieb algebra.
//!
//! The core is generic over [`Scalar`]; [`Rational`] is the default
//! backend and [`Sym`] evaluates everything over rational functions.

pub mod diagrams;
pub mod error;
pub mod hecke;
pub mod irreps;
pub mod linalg;
pub mod params;
pub mod pathbasis;
pub mod rep;
pub mod report;
pub mod scalar;
pub mod spinchain;
pub mod symbolic;
pub mod wordrep;

pub use error::{Error, Result};
pub use params::{make_param_point, make_twist, Ctx, DerivedParams, HalfExponent, ParamPoint, Parity};
pub use scalar::Scalar;

/// Exact rationals, the standing backend.
pub type Rational = num_rational::BigRational;
/// Rational functions in `q^{1/2}, q^{w1/2}, q^{w2/2}, q^{theta/2}`.
pub type Sym = symbolic::RatFunc;
/// Library version embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
