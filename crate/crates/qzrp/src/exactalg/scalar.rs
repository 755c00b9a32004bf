//! Scalar fields that polynomials can be evaluated in.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive};

/// A field the exact layer can be evaluated into.
pub trait Scalar: Clone + Num + Neg<Output = Self> + PartialEq + Debug + Send + Sync {
    fn from_bigint(v: &BigInt) -> Self;
    fn from_ratio(v: &BigRational) -> Self;
}

impl Scalar for BigRational {
    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }
    fn from_ratio(v: &BigRational) -> Self {
        v.clone()
    }
}

impl Scalar for f64 {
    fn from_bigint(v: &BigInt) -> Self {
        v.to_f64().unwrap_or(f64::NAN)
    }
    fn from_ratio(v: &BigRational) -> Self {
        v.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {
    fn from_bigint(v: &BigInt) -> Self {
        v.to_f32().unwrap_or(f32::NAN)
    }
    fn from_ratio(v: &BigRational) -> Self {
        v.to_f32().unwrap_or(f32::NAN)
    }
}

/// `x^k` for any integer `k`; negative powers divide.
pub fn pow_i<F: Scalar>(x: &F, k: i32) -> F {
    let mut acc = F::one();
    for _ in 0..k.unsigned_abs() {
        acc = acc * x.clone();
    }
    if k < 0 {
        assert!(!x.is_zero(), "negative power of zero");
        F::one() / acc
    } else {
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_powers() {
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(pow_i(&half, -3), BigRational::from_integer(8.into()));
        assert_eq!(pow_i(&2.0f64, -1), 0.5);
    }
}
