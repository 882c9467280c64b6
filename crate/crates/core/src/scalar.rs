//! Scalar abstractions shared by the geometry and counting code.
//!
//! Counting formulas are written against [`Count`], which is satisfied by
//! the primitive unsigned integers as well as [`num_bigint::BigUint`].
//! Overflow on the primitive types surfaces as an error instead of a panic
//! because every arithmetic step goes through the checked operations.
//! Planar geometry is written against [`Coord`], satisfied by exact
//! rationals and by floats.

use std::fmt::{Debug, Display};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Num, ToPrimitive};

/// Exact non-negative integer usable as a path/cycle count.
pub trait Count:
    Integer
    + Clone
    + Debug
    + Display
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    /// Widen into an arbitrary precision integer.
    fn to_biguint(&self) -> BigUint;

    /// Narrow from an arbitrary precision integer, `None` if it does not fit.
    fn from_biguint(v: &BigUint) -> Option<Self>;
}

macro_rules! impl_count_prim {
    ($($t:ty),*) => {$(
        impl Count for $t {
            fn to_biguint(&self) -> BigUint {
                BigUint::from(*self)
            }

            fn from_biguint(v: &BigUint) -> Option<Self> {
                <$t>::try_from(v).ok()
            }
        }
    )*};
}

impl_count_prim!(u32, u64, u128);

impl Count for BigUint {
    fn to_biguint(&self) -> BigUint {
        self.clone()
    }

    fn from_biguint(v: &BigUint) -> Option<Self> {
        Some(v.clone())
    }
}

/// Planar coordinate scalar.
pub trait Coord: Num + Copy + PartialOrd + Debug + ToPrimitive + Send + Sync + 'static {
    fn from_ratio(num: i64, den: i64) -> Self;
}

impl Coord for num_rational::Rational64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num_rational::Rational64::new(num, den)
    }
}

impl Coord for f64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
}

impl Coord for f32 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f32 / den as f32
    }
}

/// Checked `base^exp` by repeated squaring, `None` on overflow of `C`.
pub fn checked_pow<C: Count>(base: &C, exp: &BigUint) -> Option<C> {
    let mut result = C::one();
    if exp.bits() == 0 {
        return Some(result);
    }
    if base.is_zero() || base.is_one() {
        return Some(base.clone());
    }
    let mut acc = base.clone();
    let bits = exp.bits();
    for i in 0..bits {
        if exp.bit(i) {
            result = result.checked_mul(&acc)?;
        }
        if i + 1 < bits {
            acc = acc.checked_mul(&acc)?;
        }
    }
    Some(result)
}

/// Conversion helper for small integer constants.
pub fn lift<C: Count>(v: u64) -> C {
    C::from_u64(v).expect("every Count type holds u32 constants")
}
