use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::roots::{count_roots_closed, rational_roots, refine_root, squarefree_part};
use super::{default_precision_bits, ExactError, IntPolynomial, Interval, Rational};

/// Real algebraic number: a primitive integer polynomial (positive leading
/// coefficient) and a rational interval isolating one of its real roots.
///
/// Irreducibility is the caller's claim; construction only screens content,
/// rational roots and squarefreeness.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "AlgebraicRepr", into = "AlgebraicRepr")]
pub struct AlgebraicNumber {
    minimal_polynomial: IntPolynomial,
    isolating_interval: Interval,
    cached_enclosure: Interval,
}

#[derive(Clone, Serialize, Deserialize)]
struct AlgebraicRepr {
    min_poly: IntPolynomial,
    isolating: [Rational; 2],
}

impl TryFrom<AlgebraicRepr> for AlgebraicNumber {
    type Error = ExactError;
    fn try_from(repr: AlgebraicRepr) -> Result<Self, Self::Error> {
        let [lo, hi] = repr.isolating;
        make_algebraic(&repr.min_poly, &Interval::closed(lo, hi)?)
    }
}

impl From<AlgebraicNumber> for AlgebraicRepr {
    fn from(a: AlgebraicNumber) -> Self {
        AlgebraicRepr {
            min_poly: a.minimal_polynomial,
            isolating: [a.isolating_interval.lo().clone(), a.isolating_interval.hi().clone()],
        }
    }
}

/// Validate `p` and `hint` and build the designated root.
pub fn make_algebraic(p: &IntPolynomial, hint: &Interval) -> Result<AlgebraicNumber, ExactError> {
    if p.is_zero() {
        return Err(ExactError::ZeroPolynomial);
    }
    if !p.is_primitive() {
        return Err(ExactError::NotPrimitive(p.content().clone()));
    }
    let p = if p.leading().is_negative() { p.neg() } else { p.clone() };
    if p.degree() == 0 {
        return Err(ExactError::NoRootInInterval);
    }
    let hull = hint.to_closed();
    if p.degree() == 1 {
        let root = Rational::new(-p.coeff(0), p.coeff(1))?;
        if !hint.contains(&root) {
            return Err(ExactError::NoRootInInterval);
        }
        let pt = Interval::point(root);
        return Ok(AlgebraicNumber {
            minimal_polynomial: p,
            isolating_interval: pt.clone(),
            cached_enclosure: pt,
        });
    }
    if let Some(root) = rational_roots(&p)?.into_iter().next() {
        return Err(ExactError::ReducibleByRationalRoot(root));
    }
    if squarefree_part(&p).degree() < p.degree() {
        return Err(ExactError::NotSquarefree);
    }
    match count_roots_closed(&p, hull.lo(), hull.hi())? {
        0 => return Err(ExactError::NoRootInInterval),
        1 => {}
        n => return Err(ExactError::MultipleRootsInInterval(n)),
    }
    // open hint endpoints are never roots here (no rational roots), so the hull is equivalent
    let mut a = AlgebraicNumber {
        minimal_polynomial: p,
        isolating_interval: hull.clone(),
        cached_enclosure: hull,
    };
    let bits = default_precision_bits();
    a.cached_enclosure = a.enclosure_with_bits(bits);
    Ok(a)
}

impl AlgebraicNumber {
    pub fn minimal_polynomial(&self) -> &IntPolynomial {
        &self.minimal_polynomial
    }

    pub fn isolating_interval(&self) -> &Interval {
        &self.isolating_interval
    }

    pub fn enclosure(&self) -> &Interval {
        &self.cached_enclosure
    }

    pub fn degree(&self) -> usize {
        self.minimal_polynomial.degree()
    }

    /// The value itself when the minimal polynomial is linear.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.cached_enclosure.is_point().then(|| self.cached_enclosure.lo())
    }

    /// Closed enclosure of width at most `2^-bits · max(1, |a|)`, nested inside the cached one.
    pub fn enclosure_with_bits(&self, bits: u32) -> Interval {
        let enc = &self.cached_enclosure;
        if enc.is_point() {
            return enc.clone();
        }
        let scale = enc.lo().abs().max(enc.hi().abs()).max(Rational::one());
        let width = &scale * &Rational::pow2(-(bits as i64));
        if enc.length() <= width {
            return enc.clone();
        }
        refine_root(&self.minimal_polynomial, enc, &width)
    }

    /// Copy whose cached enclosure has been refined to `bits` of relative precision.
    pub fn refined(&self, bits: u32) -> AlgebraicNumber {
        AlgebraicNumber {
            cached_enclosure: self.enclosure_with_bits(bits),
            ..self.clone()
        }
    }

    /// Exact comparison with a rational (never ties unless the degree is 1).
    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        if let Some(v) = self.as_rational() {
            return v.cmp(r);
        }
        let mut bits = 32;
        loop {
            let enc = self.enclosure_with_bits(bits);
            if enc.hi() < r {
                return Ordering::Less;
            }
            if enc.lo() > r {
                return Ordering::Greater;
            }
            // r is not a root, so refinement eventually separates it
            bits *= 2;
        }
    }

    /// Compare `|a|` with a non-negative rational.
    pub fn abs_cmp_rational(&self, r: &Rational) -> Ordering {
        if self.signum() < 0 {
            // |a| = -a, and -a ⋚ r  ⟺  a ⋛ -r
            self.cmp_rational(&-r).reverse()
        } else {
            self.cmp_rational(r)
        }
    }

    pub fn signum(&self) -> i32 {
        match self.cmp_rational(&Rational::zero()) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.enclosure_with_bits(60).midpoint().to_f64()
    }

    pub fn is_zero(&self) -> bool {
        self.minimal_polynomial.degree() == 1 && self.minimal_polynomial.coeff(0).is_zero()
    }
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "root of {} in {}", self.minimal_polynomial, self.isolating_interval)
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
