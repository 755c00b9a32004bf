//! Tableau Markov chains, the multispecies totally asymmetric zero-range
//! process on a ring, and modified Macdonald polynomials at `q = 1`.
//!
//! Everything symbolic lives in [`Poly`], a sparse Laurent polynomial in
//! `t, x_1, ..., x_n` with big-integer coefficients. Numeric evaluation is
//! generic over [`Scalar`]; exact checks use [`Rational`].

pub mod error;
pub mod exactalg;
pub mod macdonald;
pub mod multiline;
pub mod observables;
pub mod shapes;
pub mod tabchain;
pub mod tableaux;
pub mod verify;
pub mod zrp;

pub use error::{Budget, Error, Result};
pub use exactalg::{Exponent, LaurentPoly, Scalar};
pub use shapes::{Cell, Partition};
pub use tableaux::Filling;
pub use zrp::ZrpConfig;

/// Library version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub type Poly = LaurentPoly<num_bigint::BigInt>;
pub type Rational = num_rational::BigRational;
