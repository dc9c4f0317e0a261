//! Scalar field abstraction shared by the linear algebra, the quadric model
//! and the truncated series.
//!
//! Exact types (`Ratio<i64>`, `Ratio<i128>`, `BigRational`) compare with zero
//! exactly. Floating types use an absolute tolerance, so ranks and inertia
//! computed over `f32`/`f64` are only as good as that tolerance.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::Num;

pub trait Scalar: Num + Clone + PartialOrd + Neg<Output = Self> + Debug + Display {
    fn from_i64(v: i64) -> Self;

    /// Zero test used for pivoting.
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn is_positive_strict(&self) -> bool {
        !self.is_negligible() && *self > Self::zero()
    }

    fn is_negative_strict(&self) -> bool {
        !self.is_negligible() && *self < Self::zero()
    }
}

/// Marker for scalars whose zero test is exact.
pub trait ExactScalar: Scalar {}

impl Scalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn is_negligible(&self) -> bool {
        self.abs() <= 1e-9
    }
}

impl Scalar for f32 {
    fn from_i64(v: i64) -> Self {
        v as f32
    }

    fn is_negligible(&self) -> bool {
        self.abs() <= 1e-4
    }
}

impl Scalar for Ratio<i64> {
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(v)
    }
}

impl Scalar for Ratio<i128> {
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(v as i128)
    }
}

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(BigInt::from(v))
    }
}

impl ExactScalar for Ratio<i64> {}
impl ExactScalar for Ratio<i128> {}
impl ExactScalar for BigRational {}

/// `numerator / denominator` as a scalar. Panics on a zero denominator.
pub fn ratio<S: Scalar>(numerator: i64, denominator: i64) -> S {
    assert!(denominator != 0, "zero denominator");
    S::from_i64(numerator) / S::from_i64(denominator)
}
