use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{ExactError, Rational};

/// Integer polynomial `α₀ + α₁x + … + α_K x^K`, coefficients in ascending degree.
///
/// Trailing zero coefficients are stripped so the leading coefficient is nonzero
/// unless the polynomial is zero. The content (gcd of coefficients, 0 for the zero
/// polynomial) is computed once at construction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
    content: BigInt,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        let content = coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        IntPolynomial { coeffs, content }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        IntPolynomial::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial::new(Vec::new())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn content(&self) -> &BigInt {
        &self.content
    }

    pub fn is_primitive(&self) -> bool {
        self.content.is_one()
    }

    /// Divide out the content and make the leading coefficient positive.
    pub fn primitive_part(&self) -> IntPolynomial {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content.clone();
        if self.leading().is_negative() {
            g = -g;
        }
        IntPolynomial::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn neg(&self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || other.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }

    /// Coefficients of `P(2^k x)` (k ≥ 0): `α_i · 2^{k i}`.
    pub fn scale_argument_pow2(&self, k: u32) -> IntPolynomial {
        IntPolynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c << (k as usize * i))
                .collect(),
        )
    }

    /// `2^{q}·P(x/2)` where `q` is the degree: coefficients `α_i · 2^{q-i}`.
    pub fn halve_argument_integral(&self) -> IntPolynomial {
        let q = self.degree();
        IntPolynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c << (q - i))
                .collect(),
        )
    }

    pub fn derivative(&self) -> IntPolynomial {
        IntPolynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        // Horner over a common denominator to avoid repeated gcds.
        let n = x.numer();
        let d = x.denom();
        let k = self.degree();
        let mut acc = BigInt::zero();
        let mut dpow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * n + c * &dpow;
            dpow *= d;
        }
        // acc = Σ α_i n^i d^{k-i}
        let denom = num_traits::pow(d.clone(), k);
        Rational::new(acc, denom).expect("positive denominator")
    }

    /// Sign of `P(x)` as -1, 0 or 1.
    pub fn sign_at(&self, x: &Rational) -> i32 {
        self.eval(x).signum()
    }

    /// Largest absolute coefficient.
    pub fn inf_norm(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    /// Sum of squared coefficients.
    pub fn l2_norm_sq(&self) -> BigInt {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// Remove the factor `x^k` with the largest `k`, returning `(k, P / x^k)`.
    pub fn strip_zero_roots(&self) -> (usize, IntPolynomial) {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if k == 0 || self.is_zero() {
            return (0, self.clone());
        }
        (k, IntPolynomial::new(self.coeffs[k..].to_vec()))
    }

    pub fn to_rational(&self) -> RationalPolynomial {
        RationalPolynomial::new(self.coeffs.iter().cloned().map(Rational::from_integer).collect())
    }

    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(|c| c.to_i64()).collect()
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    write!(f, "x")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        super::int_serde::vec::serialize(&self.coeffs, serializer)
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(IntPolynomial::new(super::int_serde::vec::deserialize(deserializer)?))
    }
}

/// Polynomial with rational coefficients, ascending degree, leading coefficient nonzero.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RationalPolynomial {
    coeffs: Vec<Rational>,
}

impl RationalPolynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        RationalPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        RationalPolynomial { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn scale(&self, k: &Rational) -> RationalPolynomial {
        RationalPolynomial::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// `R(s·x)`.
    pub fn scale_argument(&self, s: &Rational) -> RationalPolynomial {
        let mut pow = Rational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c * &pow);
            pow = &pow * s;
        }
        RationalPolynomial::new(out)
    }

    pub fn derivative(&self) -> RationalPolynomial {
        RationalPolynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &Rational::from(i as i64))
                .collect(),
        )
    }

    pub fn neg(&self) -> RationalPolynomial {
        RationalPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn monic(&self) -> RationalPolynomial {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        RationalPolynomial::new(self.coeffs.iter().map(|c| c / &lc).collect())
    }

    /// Euclidean division `self = q·d + r`.
    pub fn div_rem(&self, d: &RationalPolynomial) -> Result<(RationalPolynomial, RationalPolynomial), ExactError> {
        if d.is_zero() {
            return Err(ExactError::ZeroPolynomial);
        }
        let mut rem = self.coeffs.clone();
        let dd = d.degree();
        let lc = d.leading();
        if self.is_zero() || self.degree() < dd {
            return Ok((RationalPolynomial::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); self.degree() - dd + 1];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lc;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] = &rem[k + j] - &(&c * dc);
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((RationalPolynomial::new(quot), RationalPolynomial::new(rem)))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &RationalPolynomial) -> RationalPolynomial {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Write `self = factor · P` with `P` a primitive integer polynomial with positive leading coefficient.
    pub fn clear_denominators(&self) -> (Rational, IntPolynomial) {
        if self.is_zero() {
            return (Rational::zero(), IntPolynomial::zero());
        }
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        let raw = IntPolynomial::new(ints);
        let prim = raw.primitive_part();
        // self = raw / lcm and raw = g · prim (g carries the sign)
        let g = Rational::from_integer(raw.leading()) / Rational::from_integer(prim.leading());
        let factor = g / Rational::from_integer(lcm);
        (factor, prim)
    }
}
