use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ExactError;

/// Exact rational number in canonical form (reduced, positive denominator).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

/// Operation selector for [`rat_op`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RatOp {
    Add,
    Sub,
    Mul,
    Div,
    Cmp,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RatOpResult {
    Value(Rational),
    Ordering(Ordering),
}

/// Apply a single arithmetic operation. Division by zero is reported, not panicked on.
pub fn rat_op(x: &Rational, y: &Rational, op: RatOp) -> Result<RatOpResult, ExactError> {
    Ok(match op {
        RatOp::Add => RatOpResult::Value(x + y),
        RatOp::Sub => RatOpResult::Value(x - y),
        RatOp::Mul => RatOpResult::Value(x * y),
        RatOp::Div => RatOpResult::Value(x.checked_div(y)?),
        RatOp::Cmp => RatOpResult::Ordering(x.cmp(y)),
    })
}

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self, ExactError> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Rational(BigRational::new(numer.into(), denom)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn from_big(r: BigRational) -> Self {
        Rational(r)
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    /// `2^exp` for any signed exponent.
    pub fn pow2(exp: i64) -> Self {
        let p = BigInt::one() << exp.unsigned_abs();
        if exp >= 0 {
            Rational::from_integer(p)
        } else {
            Rational(BigRational::new(BigInt::one(), p))
        }
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
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

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn signum(&self) -> i32 {
        if self.0.is_positive() {
            1
        } else if self.0.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn floor(&self) -> BigInt {
        self.0.numer().div_floor(self.0.denom())
    }

    pub fn ceil(&self) -> BigInt {
        -((-self.0.numer()).div_floor(self.0.denom()))
    }

    /// Fractional part in `[0, 1)`.
    pub fn frac(&self) -> Rational {
        self - &Rational::from_integer(self.floor())
    }

    pub fn checked_div(&self, other: &Rational) -> Result<Rational, ExactError> {
        if other.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Rational(&self.0 / &other.0))
    }

    pub fn recip(&self) -> Result<Rational, ExactError> {
        Rational::one().checked_div(self)
    }

    pub fn pow(&self, exp: u32) -> Rational {
        let mut acc = Rational::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    pub fn midpoint(&self, other: &Rational) -> Rational {
        Rational((&self.0 + &other.0) / BigRational::from_integer(BigInt::from(2)))
    }

    pub fn min(self, other: Rational) -> Rational {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Rational) -> Rational {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            // extreme magnitudes: scale through bit lengths
            let n = self.0.numer().bits() as i64;
            let d = self.0.denom().bits() as i64;
            let shift = n - d;
            let scaled = if shift > 0 {
                &self.0 / BigRational::from_integer(BigInt::one() << shift as u64)
            } else {
                &self.0 * BigRational::from_integer(BigInt::one() << (-shift) as u64)
            };
            scaled.to_f64().unwrap_or(0.0) * 2f64.powi(shift as i32)
        })
    }

    /// Nearest dyadic rational below (or equal to) `self` with `bits` fractional bits.
    pub fn round_down(&self, bits: u32) -> Rational {
        let scale = BigInt::one() << bits;
        let n = (self.0.numer() * &scale).div_floor(self.0.denom());
        Rational(BigRational::new(n, scale))
    }

    /// Nearest dyadic rational above (or equal to) `self` with `bits` fractional bits.
    pub fn round_up(&self, bits: u32) -> Rational {
        let scale = BigInt::one() << bits;
        let n = -((-(self.0.numer() * &scale)).div_floor(self.0.denom()));
        Rational(BigRational::new(n, scale))
    }

    /// Exact conversion of a finite float.
    pub fn from_f64(x: f64) -> Option<Rational> {
        BigRational::from_float(x).map(Rational)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Rational {
    type Err = ExactError;

    /// Accepts `p`, `p/q` and plain decimals such as `-1.25` (converted exactly).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || ExactError::Parse(format!("not a rational: {s:?}"));
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            return Rational::new(n, d);
        }
        if let Some((int_part, frac_part)) = s.split_once('.') {
            if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let negative = int_part.starts_with('-');
            let digits = format!("{}{}", int_part.trim_start_matches(['-', '+']), frac_part);
            let mut n: BigInt = digits.parse().map_err(|_| bad())?;
            if negative {
                n = -n;
            }
            let d = num_traits::pow(BigInt::from(10), frac_part.len());
            return Rational::new(n, d);
        }
        let n: BigInt = s.parse().map_err(|_| bad())?;
        Ok(Rational::from_integer(n))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RationalRepr {
    Text(String),
    Int(i64),
}

/// Canonical form is a string; bare integers are also accepted.
impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        match RationalRepr::deserialize(deserializer)? {
            RationalRepr::Text(s) => s.parse().map_err(serde::de::Error::custom),
            RationalRepr::Int(n) => Ok(Rational::from(n)),
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($tr::$method(&self.0, &rhs.0))
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($tr::$method(self.0, rhs.0))
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($tr::$method(self.0, &rhs.0))
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($tr::$method(&self.0, rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
// Panics on a zero divisor like the integer types; use `checked_div` on untrusted input.
forward_binop!(Div, div);

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

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_form() {
        assert_eq!(r("2/4"), r("1/2"));
        assert_eq!(r("2/-4").to_string(), "-1/2");
        assert_eq!(r("0/7").denom(), &BigInt::one());
        assert_eq!(r("1.25"), r("5/4"));
        assert_eq!(r("-0.5"), r("-1/2"));
    }

    #[test]
    fn ops() {
        let third = r("1/3");
        let sixth = r("1/6");
        assert_eq!(
            rat_op(&third, &sixth, RatOp::Add).unwrap(),
            RatOpResult::Value(r("1/2"))
        );
        assert_eq!(
            rat_op(&third, &sixth, RatOp::Cmp).unwrap(),
            RatOpResult::Ordering(Ordering::Greater)
        );
        assert_eq!(
            rat_op(&third, &Rational::zero(), RatOp::Div),
            Err(ExactError::DivisionByZero)
        );
        assert!(Rational::new(1, 0).is_err());
    }

    #[test]
    fn floor_frac_and_rounding() {
        assert_eq!(r("-7/2").floor(), BigInt::from(-4));
        assert_eq!(r("-7/2").ceil(), BigInt::from(-3));
        assert_eq!(r("-7/2").frac(), r("1/2"));
        let x = r("1/3");
        assert!(x.round_down(10) <= x && x <= x.round_up(10));
        assert!(&x.round_up(10) - &x.round_down(10) <= Rational::pow2(-10));
        assert_eq!(Rational::pow2(-3), r("1/8"));
    }

    #[test]
    fn parse_errors() {
        assert!("abc".parse::<Rational>().is_err());
        assert!("1.".parse::<Rational>().is_err());
        assert!("1/0".parse::<Rational>().is_err());
    }

    #[test]
    fn serde_string_form() {
        let x = r("-3/2");
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, "\"-3/2\"");
        assert_eq!(serde_json::from_str::<Rational>(&s).unwrap(), x);
    }
}
