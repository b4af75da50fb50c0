//! Joint distribution of descent number and major index over conjugacy
//! classes of the symmetric group, computed exactly (generating functions and
//! brute force) and by simulation, together with the numeric quantities that
//! govern its bivariate Gaussian limit.
//!
//! Polynomial and matrix types are generic over their scalar; the aliases
//! below name the instantiations used throughout.

pub mod asymptotics;
pub mod bigfloat;
pub mod combinatorics;
pub mod error;
pub mod exactpoly;
pub mod genfun;
pub mod montecarlo;
pub mod oracle;
pub mod quadrature;
pub mod scalar;
pub mod verify;

pub use bigfloat::BigFloat;
pub use combinatorics::CycleType;
pub use error::{Error, Result};
pub use exactpoly::{BiPoly, Poly};
pub use scalar::{Field, FromExact, Real, Scalar};

use num_bigint::BigInt;
use num_rational::BigRational;

/// Exact-rational polynomial in `q`.
pub type QPoly = Poly<BigRational>;
/// Integer polynomial in `q`; the working type of the generating-function engine.
pub type IntPoly = Poly<BigInt>;
/// Exact-rational polynomial in `(t, q)`.
pub type TQPoly = BiPoly<BigRational>;
/// Integer polynomial in `(t, q)`.
pub type IntTQPoly = BiPoly<BigInt>;
/// Machine-precision polynomial in `q`.
pub type Poly64 = Poly<f64>;
