//! Scalar abstraction shared by the exact and floating-point code paths.
//!
//! The combinatorial machinery (metric validation, tight spans, matching
//! certificates, the simplex solver) is generic over [`Scalar`] and is meant
//! to run on arbitrary-precision rationals, where every comparison is exact.
//! The bicombing and boundary layers instantiate the same geometric
//! primitives with `f64` and work with explicit tolerances instead.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed};
use std::fmt::{Debug, Display};

/// A linearly ordered field element.
///
/// Implementors must form a field under the `Num` operations and carry a
/// total order on the values actually produced (no NaNs in the `f64` case).
pub trait Scalar:
    Num + Signed + FromPrimitive + PartialOrd + Clone + Debug + Display + Send + Sync + 'static
{
    fn half(&self) -> Self {
        self.clone() / Self::from_u32(2).expect("2 is representable")
    }

    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("small integer is representable")
    }
}

impl Scalar for BigRational {}
impl Scalar for f64 {}

/// Maximum of two scalars. Panics on incomparable values (NaN).
pub fn smax<S: Scalar>(a: S, b: S) -> S {
    if b > a {
        b
    } else {
        a
    }
}

/// Minimum of two scalars. Panics on incomparable values (NaN).
pub fn smin<S: Scalar>(a: S, b: S) -> S {
    if b < a {
        b
    } else {
        a
    }
}

/// Shorthand for an exact rational from a numerator/denominator pair.
pub fn rat(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parses `"p/q"` or `"p"` into an exact rational.
pub fn rat_from_str(s: &str) -> Result<BigRational, String> {
    s.trim()
        .parse::<BigRational>()
        .map_err(|e| format!("invalid rational {s:?}: {e}"))
}
