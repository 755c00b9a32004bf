//! Exact arithmetic: Laurent polynomials, t-analogs, symmetric polynomials,
//! exact division, gcd evidence, and fraction-free linear solves.

pub mod divide;
pub mod gcd;
pub mod linalg;
pub mod poly;
pub mod qanalog;
pub mod scalar;
pub mod symm;

pub use divide::{exact_divide, NotDivisible};
pub use gcd::{gcd_is_unit, gcd_is_unit_with_candidates, GcdVerdict};
pub use linalg::bareiss_solve;
pub use poly::{Exponent, JsonTerm, LaurentPoly};
pub use qanalog::{log_derivative, t_binomial, t_int, t_multinomial};
pub use scalar::{pow_i, Scalar};
pub use symm::{complete_homogeneous, is_symmetric_under, monomial_symmetric};
