//! Numeric traits the solver stack is generic over.
//!
//! [`Scalar`] is the field-like bound used by exact evaluation code (values,
//! best responses, simplex projection). It is implemented for `f32`, `f64`
//! and [`Rational64`], so the same traversal can be run in exact arithmetic.
//! [`Real`] adds the transcendental operations needed by softmax policies,
//! step schedules and the neural module.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::Neg;

use num_rational::Rational64;
use num_traits::{Float, FromPrimitive, Num, ToPrimitive};

pub trait Scalar:
    Num
    + Neg<Output = Self>
    + Copy
    + PartialOrd
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Exact `numer / denom` where representable, nearest value otherwise.
    fn from_ratio(numer: i64, denom: i64) -> Self;

    /// Slack used when deciding whether a vector already lies on the
    /// simplex. Zero for exact types.
    fn simplex_slack(len: usize) -> Self;

    fn from_int(v: i64) -> Self {
        Self::from_ratio(v, 1)
    }

    fn from_count(n: usize) -> Self {
        Self::from_ratio(n as i64, 1)
    }

    fn is_nan_value(self) -> bool {
        self.partial_cmp(&self).is_none()
    }

    fn is_finite_value(self) -> bool {
        self.to_f64().is_some_and(f64::is_finite)
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn abs_value(self) -> Self {
        if self < Self::zero() {
            -self
        } else {
            self
        }
    }
}

pub trait Real: Scalar + Float {}

impl Scalar for f64 {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        numer as f64 / denom as f64
    }

    fn simplex_slack(len: usize) -> Self {
        4.0 * f64::EPSILON * len.max(1) as f64
    }
}

impl Scalar for f32 {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        (numer as f64 / denom as f64) as f32
    }

    fn simplex_slack(len: usize) -> Self {
        4.0 * f32::EPSILON * len.max(1) as f32
    }
}

impl Scalar for Rational64 {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        Rational64::new(numer, denom)
    }

    fn simplex_slack(_len: usize) -> Self {
        Rational64::from_integer(0)
    }
}

impl Real for f64 {}
impl Real for f32 {}

/// Converts a probability stored as an exact ratio into the working scalar.
pub(crate) fn ratio_to<T: Scalar>(p: Rational64) -> T {
    T::from_ratio(*p.numer(), *p.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_ratio_is_exact() {
        let third: Rational64 = Scalar::from_ratio(1, 3);
        assert_eq!(third * Rational64::from_integer(3), Rational64::from_integer(1));
        assert!(!Scalar::is_nan_value(third));
        assert!(Scalar::is_nan_value(f64::NAN));
        assert!(!f64::INFINITY.is_finite_value());
    }

    #[test]
    fn helpers() {
        assert_eq!(Scalar::max_of(1.0f64, 2.0), 2.0);
        assert_eq!(Scalar::abs_value(-3.0f64), 3.0);
        assert_eq!(<f64 as Scalar>::from_count(4), 4.0);
    }
}
