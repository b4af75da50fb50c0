//! Scalar abstractions shared by the polynomial engine and the numeric layer.
//!
//! [`Scalar`] is the ring interface used by [`crate::Poly`] and
//! [`crate::BiPoly`]: exact integers, exact rationals, machine floats and
//! [`BigFloat`] all qualify. [`Real`] adds the transcendental functions the
//! asymptotic layer needs.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, ToPrimitive, Zero};

use crate::bigfloat::BigFloat;

/// Commutative ring with a total equality test.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Scalar for T where
    T: Clone
        + PartialEq
        + Debug
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

/// A [`Scalar`] with exact or approximate division.
pub trait Field: Scalar + Div<Output = Self> + FromPrimitive + PartialOrd {}

impl<T> Field for T where T: Scalar + Div<Output = T> + FromPrimitive + PartialOrd {}

/// Ordered field with `exp`/`sqrt`, for m.g.f. targets and normalization.
pub trait Real: Field {
    fn exp(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn to_f64(&self) -> f64;
}

impl Real for f64 {
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Real for f32 {
    fn exp(&self) -> Self {
        f32::exp(*self)
    }
    fn sqrt(&self) -> Self {
        f32::sqrt(*self)
    }
    fn to_f64(&self) -> f64 {
        *self as f64
    }
}

impl Real for BigFloat {
    fn exp(&self) -> Self {
        BigFloat::exp(self)
    }
    fn sqrt(&self) -> Self {
        BigFloat::sqrt(self)
    }
    fn to_f64(&self) -> f64 {
        BigFloat::to_f64(self)
    }
}

/// Converts exact values into a target scalar, rounding where the target is inexact.
pub trait FromExact: Sized {
    fn from_bigint(v: &BigInt) -> Self;
    fn from_rational(v: &BigRational) -> Self;
}

impl FromExact for f64 {
    fn from_bigint(v: &BigInt) -> Self {
        v.to_f64().unwrap_or(f64::NAN)
    }
    fn from_rational(v: &BigRational) -> Self {
        v.to_f64().unwrap_or(f64::NAN)
    }
}

impl FromExact for BigFloat {
    fn from_bigint(v: &BigInt) -> Self {
        BigFloat::from_bigint(v.clone())
    }
    fn from_rational(v: &BigRational) -> Self {
        BigFloat::from_rational(v)
    }
}

impl FromExact for BigRational {
    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }
    fn from_rational(v: &BigRational) -> Self {
        v.clone()
    }
}

/// `x^e` by repeated squaring.
pub fn powu<T: Scalar>(x: &T, e: usize) -> T {
    num_traits::pow(x.clone(), e)
}

/// `num / den` as an exact rational.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
