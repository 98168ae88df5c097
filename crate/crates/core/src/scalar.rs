//! The exact integer scalar abstraction.
//!
//! Every algebraic routine in this crate is written once over [`ExactInt`]
//! and instantiated for a checked machine width (`i64`, `i128`) and for
//! [`BigInt`]. Fixed-width backends report overflow as
//! [`Error::ArithmeticOverflow`]; [`with_fallback`] reruns such a
//! computation over `BigInt`.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::{BigInt, ToBigInt};
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Signed, ToPrimitive};

use crate::error::{Error, Result};

pub trait ExactInt:
    Clone
    + Debug
    + Display
    + Eq
    + Ord
    + Hash
    + Integer
    + Signed
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
    + ToBigInt
    + Send
    + Sync
    + 'static
{
    fn from_small(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("every exact backend holds i64")
    }

    fn to_big(&self) -> BigInt {
        self.to_bigint().expect("integers convert to BigInt")
    }
}

impl<T> ExactInt for T where
    T: Clone
        + Debug
        + Display
        + Eq
        + Ord
        + Hash
        + Integer
        + Signed
        + CheckedAdd
        + CheckedSub
        + CheckedMul
        + FromPrimitive
        + ToPrimitive
        + ToBigInt
        + Send
        + Sync
        + 'static
{
}

#[inline]
pub(crate) fn add<T: ExactInt>(a: &T, b: &T) -> Result<T> {
    a.checked_add(b).ok_or(Error::ArithmeticOverflow)
}

#[inline]
pub(crate) fn sub<T: ExactInt>(a: &T, b: &T) -> Result<T> {
    a.checked_sub(b).ok_or(Error::ArithmeticOverflow)
}

#[inline]
pub(crate) fn mul<T: ExactInt>(a: &T, b: &T) -> Result<T> {
    a.checked_mul(b).ok_or(Error::ArithmeticOverflow)
}

/// Runs `narrow` and, only if it overflowed, `wide`.
pub fn with_fallback<R>(
    narrow: impl FnOnce() -> Result<R>,
    wide: impl FnOnce() -> Result<R>,
) -> Result<R> {
    match narrow() {
        Err(Error::ArithmeticOverflow) => wide(),
        other => other,
    }
}
