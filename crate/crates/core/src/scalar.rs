//! The integer scalar abstraction shared by every module.
//!
//! All algebra in this crate is written against [`Int`], which is implemented
//! for `i64`, `i128` and [`BigInt`]. The fixed-width instantiations are used
//! internally where a bound on the magnitudes is known in advance (the
//! enumerator hot loop); the public entry points at the crate root are
//! instantiated at [`BigInt`], which cannot overflow.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// An exact signed integer type.
pub trait Int:
    Integer
    + Signed
    + Roots
    + Clone
    + Hash
    + Debug
    + Display
    + FromStr<Err: Display>
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    fn to_bigint(&self) -> BigInt;

    /// Narrowing conversion; `None` when the value does not fit.
    fn from_bigint(n: &BigInt) -> Option<Self>;

    fn small(n: u32) -> Self {
        <Self as FromPrimitive>::from_u32(n).expect("every Int holds u32 values")
    }
}

macro_rules! impl_int_primitive {
    ($($t:ty),*) => {$(
        impl Int for $t {
            fn to_bigint(&self) -> BigInt {
                BigInt::from(*self)
            }

            fn from_bigint(n: &BigInt) -> Option<Self> {
                <$t>::try_from(n).ok()
            }
        }
    )*};
}

impl_int_primitive!(i64, i128);

impl Int for BigInt {
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }

    fn from_bigint(n: &BigInt) -> Option<Self> {
        Some(n.clone())
    }
}

/// Converts between two scalar types, returning `None` on overflow.
pub fn convert<S: Int, T: Int>(x: &S) -> Option<T> {
    T::from_bigint(&x.to_bigint())
}

/// `base^exp` by repeated squaring.
pub fn pow<T: Int>(base: &T, exp: u32) -> T {
    num_traits::pow(base.clone(), exp as usize)
}

/// `base^exp`, or `None` if the result does not fit in `T`.
pub fn checked_pow<T: Int>(base: &T, exp: u32) -> Option<T> {
    let big = num_traits::pow(base.to_bigint(), exp as usize);
    T::from_bigint(&big)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn narrowing_conversions() {
        let big = BigInt::from(i64::MAX) + 1;
        assert_eq!(i64::from_bigint(&big), None);
        assert_eq!(i128::from_bigint(&big), Some(i64::MAX as i128 + 1));
        assert_eq!(convert::<i128, i64>(&-5), Some(-5));
    }

    #[test]
    fn checked_pow_detects_overflow() {
        assert_eq!(checked_pow(&10i64, 18), Some(10i64.pow(18)));
        assert_eq!(checked_pow(&10i64, 19), None);
        assert_eq!(pow(&BigInt::from(3), 4), BigInt::from(81));
    }
}
