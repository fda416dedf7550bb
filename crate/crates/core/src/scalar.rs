//! Exact scalar abstraction.
//!
//! Every model in this crate is generic over an ordered field with decidable
//! equality. The two instances shipped are `Ratio<i64>` (fast, panics on
//! overflow) and `Ratio<BigInt>` (the default, see [`crate::Rational`]).
//! Floating point types are deliberately not instances: they are not `Ord`
//! and the identities checked here are exact.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// An exact ordered field.
pub trait Scalar: Clone + Ord + Hash + Debug + Display + FromStr + Num + Signed + Send + Sync + 'static {
    fn from_int(v: i64) -> Self;

    /// `n / d`; panics if `d == 0`.
    fn from_frac(n: i64, d: i64) -> Self;

    /// Least integer `>= self`, saturating at zero for negative inputs.
    fn ceil_u64(&self) -> u64;

    /// Greatest integer `<= self`, saturating at zero for negative inputs.
    fn floor_u64(&self) -> u64;

    fn from_uint(v: u64) -> Self {
        Self::from_int(i64::try_from(v).expect("integer fits in i64"))
    }

    fn max_of(a: &Self, b: &Self) -> Self {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    fn min_of(a: &Self, b: &Self) -> Self {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    fn half() -> Self {
        Self::from_frac(1, 2)
    }
}

impl<T> Scalar for Ratio<T>
where
    T: Clone
        + Integer
        + Signed
        + Hash
        + Debug
        + Display
        + FromStr
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static,
{
    fn from_int(v: i64) -> Self {
        Ratio::from_integer(T::from_i64(v).expect("i64 embeds in the integer type"))
    }

    fn from_frac(n: i64, d: i64) -> Self {
        Ratio::new(
            T::from_i64(n).expect("i64 embeds in the integer type"),
            T::from_i64(d).expect("i64 embeds in the integer type"),
        )
    }

    fn ceil_u64(&self) -> u64 {
        if self.is_negative() {
            return 0;
        }
        self.ceil().to_integer().to_u64().expect("ceiling fits in u64")
    }

    fn floor_u64(&self) -> u64 {
        if self.is_negative() {
            return 0;
        }
        self.floor().to_integer().to_u64().expect("floor fits in u64")
    }
}

/// Parse a rational written as `p/q` or `p`, returning it in lowest terms.
pub fn parse_scalar<S: Scalar>(text: &str) -> Option<S> {
    text.trim().parse::<S>().ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn display_is_lowest_terms_without_unit_denominator() {
        assert_eq!(Rational::from_frac(4, 2).to_string(), "2");
        assert_eq!(Rational::from_frac(2, 6).to_string(), "1/3");
        assert_eq!(Rational::from_frac(-3, 6).to_string(), "-1/2");
    }

    #[test]
    fn parse_accepts_fraction_and_integer() {
        assert_eq!(parse_scalar::<Rational>("6/4"), Some(Rational::from_frac(3, 2)));
        assert_eq!(parse_scalar::<Rational>(" 7 "), Some(Rational::from_int(7)));
        assert_eq!(parse_scalar::<Rational>("x"), None);
    }

    #[test]
    fn ceil_and_floor() {
        let r = Rational::from_frac(7, 3);
        assert_eq!(r.ceil_u64(), 3);
        assert_eq!(r.floor_u64(), 2);
        assert_eq!(Rational::from_int(5).ceil_u64(), 5);
        assert_eq!(Rational::from_frac(-1, 2).ceil_u64(), 0);
    }
}
