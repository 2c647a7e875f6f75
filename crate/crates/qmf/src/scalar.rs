//! Scalar traits.
//!
//! The series kernel is generic over a commutative ring of exact scalars.
//! Everything above the kernel works over [`Rational`]; the graph-sum sweep
//! can also run over checked machine integers.

use std::fmt;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

/// Exact commutative ring scalar.
pub trait Scalar:
    Num + Clone + PartialEq + Neg<Output = Self> + FromPrimitive + fmt::Debug + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Num + Clone + PartialEq + Neg<Output = T> + FromPrimitive + fmt::Debug + Send + Sync + 'static
{
}

/// Scalars where division by a nonzero element is exact.
pub trait FieldScalar: Scalar {}

impl FieldScalar for BigRational {}
impl FieldScalar for Ratio<i64> {}
impl FieldScalar for Ratio<i128> {}

/// Arbitrary-precision rational numbers, always in lowest terms.
pub type Rational = BigRational;

/// Builds `n/d` as a [`Rational`].
///
/// # Panics
/// Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer `n` as a [`Rational`].
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exact conversion out of [`Rational`] into another scalar type.
pub trait FromRational: Sized {
    /// Returns `None` when the value is not representable exactly.
    fn from_rational(r: &Rational) -> Option<Self>;
}

impl FromRational for Rational {
    fn from_rational(r: &Rational) -> Option<Self> {
        Some(r.clone())
    }
}

impl FromRational for i128 {
    fn from_rational(r: &Rational) -> Option<Self> {
        if r.denom().is_one() {
            r.numer().to_i128()
        } else {
            None
        }
    }
}

impl FromRational for i64 {
    fn from_rational(r: &Rational) -> Option<Self> {
        if r.denom().is_one() {
            r.numer().to_i64()
        } else {
            None
        }
    }
}

/// Exact conversion into [`Rational`].
pub trait ToRational {
    fn to_rational(&self) -> Rational;
}

impl ToRational for Rational {
    fn to_rational(&self) -> Rational {
        self.clone()
    }
}

impl ToRational for i128 {
    fn to_rational(&self) -> Rational {
        Rational::from_integer(BigInt::from(*self))
    }
}

impl ToRational for i64 {
    fn to_rational(&self) -> Rational {
        int(*self)
    }
}

/// Formats a rational as `num/den` (denominator always present).
pub fn fmt_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `num/den` or a bare integer.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// Compact human-readable form: integers without denominator.
pub fn show_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `(-1)^n` as a scalar.
pub fn sign<T: Scalar>(n: i64) -> T {
    if n.rem_euclid(2) == 0 {
        T::one()
    } else {
        -T::one()
    }
}

/// Absolute value helper for rationals.
pub fn abs_rational(r: &Rational) -> Rational {
    r.abs()
}
