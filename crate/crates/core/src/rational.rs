//! Exact rational numbers.
//!
//! [`Rational`] wraps an arbitrary-precision fraction that is always kept in
//! lowest terms with a positive denominator. It parses integers (`"-40"`),
//! fractions (`"3/1000"`) and exact decimals (`"0.0001"`, `"1.5e-3"`), and
//! always prints in canonical `p/q` form (`p` alone when the denominator is 1).

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed rational {input:?}: {reason}")]
pub struct ParseRationalError {
    pub input: String,
    pub reason: &'static str,
}

impl Rational {
    /// Builds `numer / denom`. Panics if `denom` is zero.
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        let denom = denom.into();
        assert!(!denom.is_zero(), "zero denominator");
        Rational(BigRational::new(numer.into(), denom))
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(value.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    /// `10^exp` for any integer exponent.
    pub fn pow10(exp: i32) -> Self {
        let p = num_traits::pow(BigInt::from(10u8), exp.unsigned_abs() as usize);
        if exp >= 0 {
            Rational::from_integer(p)
        } else {
            Rational::new(1, p)
        }
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i8 {
        match self.0.numer().sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    pub fn floor(&self) -> BigInt {
        self.0.numer().div_floor(self.0.denom())
    }

    pub fn ceil(&self) -> BigInt {
        self.0.numer().div_ceil(self.0.denom())
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn from_big_rational(value: BigRational) -> Self {
        Rational(value)
    }

    /// Lossy conversion for display purposes only.
    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_digits(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::parse_bytes(s.as_bytes(), 10)
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let fail = |reason| ParseRationalError {
            input: input.to_string(),
            reason,
        };
        let (negative, body) = match input.as_bytes().first() {
            Some(b'-') => (true, &input[1..]),
            Some(b'+') => (false, &input[1..]),
            Some(_) => (false, input),
            None => return Err(fail("empty")),
        };
        let value = if let Some((num, den)) = body.split_once('/') {
            let num = parse_digits(num).ok_or_else(|| fail("bad numerator"))?;
            let den = parse_digits(den).ok_or_else(|| fail("bad denominator"))?;
            if den.is_zero() {
                return Err(fail("zero denominator"));
            }
            Rational::new(num, den)
        } else {
            let (mantissa, exponent) = match body.find(['e', 'E']) {
                Some(pos) => {
                    let exp = &body[pos + 1..];
                    let (eneg, edigits) = match exp.as_bytes().first() {
                        Some(b'-') => (true, &exp[1..]),
                        Some(b'+') => (false, &exp[1..]),
                        _ => (false, exp),
                    };
                    if edigits.is_empty()
                        || edigits.len() > 6
                        || !edigits.bytes().all(|b| b.is_ascii_digit())
                    {
                        return Err(fail("bad exponent"));
                    }
                    let e: i32 = edigits.parse().map_err(|_| fail("bad exponent"))?;
                    (&body[..pos], if eneg { -e } else { e })
                }
                None => (body, 0),
            };
            let (int_part, frac_part) = match mantissa.split_once('.') {
                Some((i, f)) => {
                    if f.is_empty() {
                        return Err(fail("missing digits after decimal point"));
                    }
                    (i, f)
                }
                None => (mantissa, ""),
            };
            let digits = format!("{int_part}{frac_part}");
            if parse_digits(int_part).is_none() {
                return Err(fail("bad digits"));
            }
            let all = parse_digits(&digits).ok_or_else(|| fail("bad digits"))?;
            let scale = exponent - frac_part.len() as i32;
            Rational::from_integer(all) * Rational::pow10(scale)
        };
        Ok(if negative { -value } else { value })
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($trait::$method(self.0, rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational($trait::$method(self.0, &rhs.0))
            }
        }
        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($trait::$method(&self.0, rhs.0))
            }
        }
        impl<'a, 'b> $trait<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                Rational($trait::$method(&self.0, &rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl From<i64> for Rational {
    fn from(value: i64) -> Self {
        Rational::from_integer(value)
    }
}

impl From<BigInt> for Rational {
    fn from(value: BigInt) -> Self {
        Rational::from_integer(value)
    }
}

/// Shorthand used throughout tests and builtins: `q("3/1000")`.
///
/// Panics on malformed input, so only use it on literals.
pub fn q(s: &str) -> Rational {
    s.parse().unwrap_or_else(|e| panic!("{e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_integers_fractions_and_decimals() {
        assert_eq!(q("-40"), Rational::from(-40));
        assert_eq!(q("3/1000"), Rational::new(3, 1000));
        assert_eq!(q("0.0001"), Rational::new(1, 10_000));
        assert_eq!(q("-0.5"), Rational::new(-1, 2));
        assert_eq!(q("1.5e-3"), Rational::new(3, 2000));
        assert_eq!(q("2E2"), Rational::from(200));
        assert_eq!(q("6/4"), Rational::new(3, 2));
        assert_eq!(q("+7"), Rational::from(7));
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in [
            "", "-", "1/0", "1/-2", "1.", ".5", "1..2", "abc", "1e", "0x10", " 1", "1 ", "1/2/3",
            "--1", "1e1000000000",
        ] {
            assert!(bad.parse::<Rational>().is_err(), "{bad:?} parsed");
        }
    }

    #[test]
    fn canonical_display() {
        assert_eq!(q("-6/4").to_string(), "-3/2");
        assert_eq!(q("10/5").to_string(), "2");
        assert_eq!(q("0.0001").to_string(), "1/10000");
        assert_eq!(q("-0").to_string(), "0");
    }

    #[test]
    fn floor_and_ceil() {
        assert_eq!(q("-7/2").floor(), BigInt::from(-4));
        assert_eq!(q("-7/2").ceil(), BigInt::from(-3));
        assert_eq!(q("7/2").ceil(), BigInt::from(4));
        assert_eq!(q("3").ceil(), BigInt::from(3));
    }

    #[test]
    fn serde_uses_strings() {
        let json = serde_json::to_string(&q("-3/7")).unwrap();
        assert_eq!(json, "\"-3/7\"");
        let back: Rational = serde_json::from_str("\"0.25\"").unwrap();
        assert_eq!(back, q("1/4"));
        assert!(serde_json::from_str::<Rational>("0.25").is_err());
    }

    proptest! {
        #[test]
        fn display_parse_round_trip(n in -1_000_000i64..1_000_000, d in 1i64..1_000_000) {
            let r = Rational::new(n, d);
            prop_assert_eq!(r.to_string().parse::<Rational>().unwrap(), r.clone());
            prop_assert!(r.denom() > &BigInt::zero());
            prop_assert!(r.numer().gcd(r.denom()).is_one() || r.is_zero());
        }

        #[test]
        fn decimal_strings_are_exact(int in 0u32..100_000, frac in 0u32..10_000) {
            let s = format!("{int}.{frac:04}");
            let expected = Rational::new(i64::from(int) * 10_000 + i64::from(frac), 10_000);
            prop_assert_eq!(s.parse::<Rational>().unwrap(), expected);
        }
    }
}
