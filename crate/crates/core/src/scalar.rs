//! Coefficient field abstraction.
//!
//! Everything that manipulates polynomial coefficients or operator entries is
//! generic over [`Scalar`]. The exact instantiation used throughout the CLI is
//! [`BigRational`]; `Rational64` and `f64` are provided for quick experiments
//! and for cross-checking that an algorithm does not secretly depend on the
//! field.

use std::fmt::{Debug, Display};
use std::ops::{AddAssign, MulAssign, Neg, SubAssign};

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{Num, One, Zero};

pub trait Scalar:
    Num + Clone + Neg<Output = Self> + AddAssign + SubAssign + MulAssign + Debug + Display + Send + Sync
{
    /// True when `==` is exact equality of field elements.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    /// Equality up to the field's notion of tolerance (exact for rationals).
    fn approx_eq(&self, other: &Self) -> bool;

    fn is_integer(&self) -> bool;
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }

    fn is_integer(&self) -> bool {
        self.denom().is_one()
    }
}

impl Scalar for Rational64 {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Rational64::from_integer(v)
    }

    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }

    fn is_integer(&self) -> bool {
        self.denom().is_one()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn approx_eq(&self, other: &Self) -> bool {
        let scale = 1.0f64.max(self.abs()).max(other.abs());
        (self - other).abs() <= 1e-9 * scale
    }

    fn is_integer(&self) -> bool {
        self.fract() == 0.0
    }
}

/// `k!` in the scalar field.
pub fn factorial<T: Scalar>(k: usize) -> T {
    let mut acc = T::one();
    for i in 2..=k {
        acc *= T::from_i64(i as i64);
    }
    acc
}

/// `base^exp` for a small integer base and nonnegative exponent.
pub fn int_pow<T: Scalar>(base: i64, exp: usize) -> T {
    let b = T::from_i64(base);
    let mut acc = T::one();
    for _ in 0..exp {
        acc *= b.clone();
    }
    acc
}

pub(crate) fn is_zero<T: Scalar>(v: &T) -> bool {
    if T::EXACT {
        v.is_zero()
    } else {
        v.approx_eq(&T::zero())
    }
}

/// Exact binomial coefficient as a `u64`; returns 0 when `k > n`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Arbitrary-precision binomial coefficient.
pub fn big_binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}
