//! Numeric parameter types.
//!
//! Thresholds such as `eps`, `delta` or `mu` enter every structural test as
//! comparisons of an integer count against a scalar multiple of a power of
//! `n`. Everything downstream is generic over [`Scalar`], so callers can pick
//! exact rationals (the default, see [`crate::Rational`]) or floats.

use std::fmt::{Debug, Display};

use num_rational::Ratio;
use num_traits::{Num, Signed};

/// A totally-ordered numeric field used for thresholds.
pub trait Scalar:
    Num + Signed + Copy + PartialOrd + Debug + Display + Send + Sync + 'static
{
    fn from_usize(v: usize) -> Self;

    /// `num / den` in this type. `den` must be non-zero.
    fn from_ratio(num: i64, den: i64) -> Self;

    fn floor_int(self) -> i64;

    fn ceil_int(self) -> i64;

    fn to_f64(self) -> f64;

    /// Parses `"0.25"`, `"1/4"`, `"3"` or `"1e-3"` style input.
    fn parse(text: &str) -> Option<Self>;

    fn half() -> Self {
        Self::from_ratio(1, 2)
    }

    fn cube(self) -> Self {
        self * self * self
    }
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn from_usize(v: usize) -> Self {
                v as $t
            }

            fn from_ratio(num: i64, den: i64) -> Self {
                num as $t / den as $t
            }

            fn floor_int(self) -> i64 {
                self.floor() as i64
            }

            fn ceil_int(self) -> i64 {
                self.ceil() as i64
            }

            fn to_f64(self) -> f64 {
                self as f64
            }

            fn parse(text: &str) -> Option<Self> {
                let text = text.trim();
                if let Some((n, d)) = text.split_once('/') {
                    let n: $t = n.trim().parse().ok()?;
                    let d: $t = d.trim().parse().ok()?;
                    return (d != 0.0).then(|| n / d);
                }
                text.parse().ok().filter(|v: &$t| v.is_finite())
            }
        }
    };
}

float_scalar!(f32);
float_scalar!(f64);

macro_rules! ratio_scalar {
    ($t:ty) => {
        impl Scalar for Ratio<$t> {
            fn from_usize(v: usize) -> Self {
                Ratio::from_integer(v as $t)
            }

            fn from_ratio(num: i64, den: i64) -> Self {
                Ratio::new(num as $t, den as $t)
            }

            fn floor_int(self) -> i64 {
                self.floor().to_integer() as i64
            }

            fn ceil_int(self) -> i64 {
                self.ceil().to_integer() as i64
            }

            fn to_f64(self) -> f64 {
                *self.numer() as f64 / *self.denom() as f64
            }

            fn parse(text: &str) -> Option<Self> {
                parse_exact::<$t>(text)
            }
        }
    };
}

ratio_scalar!(i64);
ratio_scalar!(i128);

trait ExactInt: Copy + num_traits::PrimInt + num_integer::Integer + std::str::FromStr {}
impl ExactInt for i64 {}
impl ExactInt for i128 {}

fn parse_exact<T: ExactInt>(text: &str) -> Option<Ratio<T>> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: T = n.trim().parse().ok()?;
        let d: T = d.trim().parse().ok()?;
        return (!d.is_zero()).then(|| Ratio::new(n, d));
    }
    let (mantissa, exponent) = match text.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let ten = T::from(10)?;
    let mut numer = T::zero();
    for digit in int_part.chars().chain(frac_part.chars()) {
        numer = numer
            .checked_mul(&ten)?
            .checked_add(&T::from(digit.to_digit(10)?)?)?;
    }
    let mut scale = exponent - frac_part.len() as i32;
    let mut denom = T::one();
    while scale > 0 {
        numer = numer.checked_mul(&ten)?;
        scale -= 1;
    }
    while scale < 0 {
        denom = denom.checked_mul(&ten)?;
        scale += 1;
    }
    if negative {
        numer = T::zero() - numer;
    }
    Some(Ratio::new(numer, denom))
}

/// `lhs >= k * sqrt(x)` without taking square roots, for `k, x >= 0`.
pub fn ge_scaled_sqrt<T: Scalar>(lhs: T, k: T, x: T) -> bool {
    lhs >= T::zero() && lhs * lhs >= k * k * x
}

/// `lhs <= k * sqrt(x)` for `k, x >= 0`.
pub fn le_scaled_sqrt<T: Scalar>(lhs: T, k: T, x: T) -> bool {
    lhs <= T::zero() || lhs * lhs <= k * k * x
}

/// Checks `0 < value < upper` and returns a readable message otherwise.
pub(crate) fn check_open_range<T: Scalar>(name: &str, value: T, upper: T) -> Result<(), String> {
    if value > T::zero() && value < upper {
        Ok(())
    } else {
        Err(format!("{name} = {value} must lie strictly between 0 and {upper}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(Rational::parse("0.2"), Some(Rational::new(1, 5)));
        assert_eq!(Rational::parse("1/8"), Some(Rational::new(1, 8)));
        assert_eq!(Rational::parse("-.5"), Some(Rational::new(-1, 2)));
        assert_eq!(Rational::parse("2.5e-2"), Some(Rational::new(1, 40)));
        assert_eq!(Rational::parse("3"), Some(Rational::from_integer(3)));
        assert_eq!(Rational::parse("x"), None);
        assert_eq!(Rational::parse("1/0"), None);
        assert_eq!(f64::parse("1/4"), Some(0.25));
    }

    #[test]
    fn rounding_is_exact_for_rationals() {
        let eps = Rational::parse("0.2").unwrap();
        let size = (Rational::half() - eps) * Rational::from_usize(20);
        assert_eq!(size.floor_int(), 6);
        assert_eq!(size.ceil_int(), 6);
    }

    #[test]
    fn sqrt_comparisons() {
        let mu = Rational::new(1, 100);
        // 2 * sqrt(0.01) * 10 = 2
        assert!(ge_scaled_sqrt(Rational::from_usize(2), Rational::from_usize(20), mu));
        assert!(!ge_scaled_sqrt(Rational::new(19, 10), Rational::from_usize(20), mu));
        assert!(le_scaled_sqrt(Rational::from_usize(2), Rational::from_usize(20), mu));
        assert!(le_scaled_sqrt(Rational::from_integer(-3), Rational::from_usize(1), mu));
    }
}
