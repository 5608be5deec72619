use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ExactError, Rational};

/// A nonempty real interval with rational endpoints and explicit closure flags.
///
/// The empty set is represented by `None` wherever an operation can produce it
/// (and by [`IntervalUnion::empty`] for unions).
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawInterval")]
pub struct Interval {
    lo: Rational,
    hi: Rational,
    lo_closed: bool,
    hi_closed: bool,
}

#[derive(Deserialize)]
struct RawInterval {
    lo: Rational,
    hi: Rational,
    lo_closed: bool,
    hi_closed: bool,
}

impl TryFrom<RawInterval> for Interval {
    type Error = ExactError;
    fn try_from(raw: RawInterval) -> Result<Self, Self::Error> {
        Interval::new(raw.lo, raw.hi, raw.lo_closed, raw.hi_closed)
    }
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational, lo_closed: bool, hi_closed: bool) -> Result<Self, ExactError> {
        match lo.cmp(&hi) {
            Ordering::Less => {}
            Ordering::Equal if lo_closed && hi_closed => {}
            _ => return Err(ExactError::InvalidInterval(format!("{lo} .. {hi}"))),
        }
        Ok(Interval { lo, hi, lo_closed, hi_closed })
    }

    /// Like [`Interval::new`] but yields `None` for an empty configuration.
    pub fn try_new(lo: Rational, hi: Rational, lo_closed: bool, hi_closed: bool) -> Option<Self> {
        Interval::new(lo, hi, lo_closed, hi_closed).ok()
    }

    pub fn closed(lo: Rational, hi: Rational) -> Result<Self, ExactError> {
        Interval::new(lo, hi, true, true)
    }

    pub fn open(lo: Rational, hi: Rational) -> Result<Self, ExactError> {
        Interval::new(lo, hi, false, false)
    }

    /// `[lo, hi[`, the shape of a quantizer cell.
    pub fn closed_open(lo: Rational, hi: Rational) -> Result<Self, ExactError> {
        Interval::new(lo, hi, true, false)
    }

    pub fn point(x: Rational) -> Self {
        Interval { lo: x.clone(), hi: x, lo_closed: true, hi_closed: true }
    }

    /// The quantizer cell `[n, n+1[`.
    pub fn cell(n: &num_bigint::BigInt) -> Self {
        let lo = Rational::from_integer(n.clone());
        let hi = &lo + &Rational::one();
        Interval { lo, hi, lo_closed: true, hi_closed: false }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn lo_closed(&self) -> bool {
        self.lo_closed
    }

    pub fn hi_closed(&self) -> bool {
        self.hi_closed
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        self.lo.midpoint(&self.hi)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = match x.cmp(&self.lo) {
            Ordering::Greater => true,
            Ordering::Equal => self.lo_closed,
            Ordering::Less => false,
        };
        let below = match x.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => self.hi_closed,
            Ordering::Greater => false,
        };
        above && below
    }

    /// True when `self` is a subset of `other`.
    pub fn is_subset_of(&self, other: &Interval) -> bool {
        let lo_ok = match self.lo.cmp(&other.lo) {
            Ordering::Greater => true,
            Ordering::Equal => other.lo_closed || !self.lo_closed,
            Ordering::Less => false,
        };
        let hi_ok = match self.hi.cmp(&other.hi) {
            Ordering::Less => true,
            Ordering::Equal => other.hi_closed || !self.hi_closed,
            Ordering::Greater => false,
        };
        lo_ok && hi_ok
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            Ordering::Greater => (self.lo.clone(), self.lo_closed),
            Ordering::Less => (other.lo.clone(), other.lo_closed),
            Ordering::Equal => (self.lo.clone(), self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            Ordering::Less => (self.hi.clone(), self.hi_closed),
            Ordering::Greater => (other.hi.clone(), other.hi_closed),
            Ordering::Equal => (self.hi.clone(), self.hi_closed && other.hi_closed),
        };
        Interval::try_new(lo, hi, lo_closed, hi_closed)
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.intersect(other).is_some()
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &Interval) -> Interval {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            Ordering::Less => (self.lo.clone(), self.lo_closed),
            Ordering::Greater => (other.lo.clone(), other.lo_closed),
            Ordering::Equal => (self.lo.clone(), self.lo_closed || other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            Ordering::Greater => (self.hi.clone(), self.hi_closed),
            Ordering::Less => (other.hi.clone(), other.hi_closed),
            Ordering::Equal => (self.hi.clone(), self.hi_closed || other.hi_closed),
        };
        Interval { lo, hi, lo_closed, hi_closed }
    }

    pub fn to_closed(&self) -> Interval {
        Interval { lo: self.lo.clone(), hi: self.hi.clone(), lo_closed: true, hi_closed: true }
    }

    /// Exact image `a·I + v`. Orientation (and closure flags) flip when `a < 0`;
    /// `a = 0` collapses to the point `v`.
    pub fn affine_image(&self, a: &Rational, v: &Rational) -> Interval {
        match a.signum() {
            0 => Interval::point(v.clone()),
            1 => Interval {
                lo: &(a * &self.lo) + v,
                hi: &(a * &self.hi) + v,
                lo_closed: self.lo_closed,
                hi_closed: self.hi_closed,
            },
            _ => Interval {
                lo: &(a * &self.hi) + v,
                hi: &(a * &self.lo) + v,
                lo_closed: self.hi_closed,
                hi_closed: self.lo_closed,
            },
        }
    }

    /// Exact preimage `{x : a·x + v ∈ I}` for `a ≠ 0`.
    pub fn affine_preimage(&self, a: &Rational, v: &Rational) -> Result<Interval, ExactError> {
        let inv = a.recip()?;
        let shift = -(v * &inv);
        Ok(self.affine_image(&inv, &shift))
    }

    /// Certified outward enclosure of `{a·x + v : a ∈ a_enc, x ∈ self}`.
    ///
    /// A point enclosure gives the exact image. Otherwise the result is the closed
    /// hull of the endpoint products, which always contains the true image.
    pub fn affine_image_enclosure(&self, a_enc: &Interval, v: &Rational) -> Interval {
        if a_enc.is_point() {
            return self.affine_image(a_enc.lo(), v);
        }
        let products = [
            a_enc.lo() * self.lo(),
            a_enc.lo() * self.hi(),
            a_enc.hi() * self.lo(),
            a_enc.hi() * self.hi(),
        ];
        let lo = products.iter().min().unwrap();
        let hi = products.iter().max().unwrap();
        Interval { lo: lo + v, hi: hi + v, lo_closed: true, hi_closed: true }
    }

    /// Outward enclosure of the preimage `{x : a·x + v ∈ self, a ∈ a_enc}`; `a_enc` must exclude 0.
    pub fn affine_preimage_enclosure(&self, a_enc: &Interval, v: &Rational) -> Result<Interval, ExactError> {
        if a_enc.is_point() {
            return self.affine_preimage(a_enc.lo(), v);
        }
        let shifted = Interval { lo: &self.lo - v, hi: &self.hi - v, ..self.clone() };
        let recip = a_enc.recip()?;
        Ok(shifted.affine_image_enclosure(&recip, &Rational::zero()))
    }

    /// Interval product (closed result unless both are points).
    pub fn mul(&self, other: &Interval) -> Interval {
        if other.is_point() {
            return self.affine_image(other.lo(), &Rational::zero());
        }
        if self.is_point() {
            return other.affine_image(self.lo(), &Rational::zero());
        }
        self.to_closed().affine_image_enclosure(other, &Rational::zero())
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
            lo_closed: self.lo_closed && other.lo_closed,
            hi_closed: self.hi_closed && other.hi_closed,
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
            lo_closed: self.hi_closed,
            hi_closed: self.lo_closed,
        }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        self.add(&other.neg())
    }

    /// Reciprocal of an interval that excludes zero.
    pub fn recip(&self) -> Result<Interval, ExactError> {
        if self.contains(&Rational::zero()) || (self.lo.is_zero() || self.hi.is_zero()) {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Interval {
            lo: self.hi.recip()?,
            hi: self.lo.recip()?,
            lo_closed: self.hi_closed,
            hi_closed: self.lo_closed,
        })
    }

    pub fn div(&self, other: &Interval) -> Result<Interval, ExactError> {
        Ok(self.mul(&other.recip()?))
    }

    /// Widen to dyadic endpoints with `bits` fractional bits (closed, outward).
    pub fn round_outward(&self, bits: u32) -> Interval {
        if self.is_point() && self.lo.denom().bits() <= bits as u64 + 1 {
            return self.clone();
        }
        let lo = self.lo.round_down(bits);
        let hi = self.hi.round_up(bits);
        let lo_closed = if lo == self.lo { self.lo_closed } else { true };
        let hi_closed = if hi == self.hi { self.hi_closed } else { true };
        Interval { lo, hi, lo_closed, hi_closed }
    }

    /// Certified sign: `Some` when the interval excludes 0.
    pub fn sign(&self) -> Option<i32> {
        if self.lo.is_positive() || (self.lo.is_zero() && !self.lo_closed) {
            Some(1)
        } else if self.hi.is_negative() || (self.hi.is_zero() && !self.hi_closed) {
            Some(-1)
        } else {
            None
        }
    }

    pub fn abs_enclosure(&self) -> Interval {
        match self.sign() {
            Some(1) => self.clone(),
            Some(_) => self.neg(),
            None => {
                let m = self.lo.abs().max(self.hi.abs());
                Interval { lo: Rational::zero(), hi: m, lo_closed: true, hi_closed: true }
            }
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for Interval {
    type Err = ExactError;

    /// Parses bracket notation such as `[0,1)`, `(-1, 1)` or `]−1,1[`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || ExactError::Parse(format!("not an interval: {s:?}"));
        let mut chars = s.chars();
        let open = chars.next().ok_or_else(bad)?;
        let close = chars.next_back().ok_or_else(bad)?;
        let lo_closed = match open {
            '[' => true,
            '(' | ']' => false,
            _ => return Err(bad()),
        };
        let hi_closed = match close {
            ']' => true,
            ')' | '[' => false,
            _ => return Err(bad()),
        };
        let body: &str = chars.as_str();
        let (lo, hi) = body.split_once(',').ok_or_else(bad)?;
        Interval::new(lo.parse()?, hi.parse()?, lo_closed, hi_closed)
    }
}

/// Image of `I` under `x ↦ a·x + v`. Exact for rational `a`; see
/// [`Interval::affine_image_enclosure`] for enclosures of irrational `a`.
pub fn interval_affine_image(i: &Interval, a_enc: &Interval, v: &Rational) -> Interval {
    i.affine_image_enclosure(a_enc, v)
}

/// Finite union of pairwise-disjoint, non-abutting intervals, sorted by `lo`.
#[derive(Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct IntervalUnion {
    parts: Vec<Interval>,
}

impl IntervalUnion {
    pub fn empty() -> Self {
        IntervalUnion { parts: Vec::new() }
    }

    pub fn from_interval(i: Interval) -> Self {
        IntervalUnion { parts: vec![i] }
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn measure(&self) -> Rational {
        self.parts.iter().map(Interval::length).sum()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.parts.iter().any(|p| p.contains(x))
    }

    pub fn intersect_interval(&self, other: &Interval) -> IntervalUnion {
        IntervalUnion {
            parts: self.parts.iter().filter_map(|p| p.intersect(other)).collect(),
        }
    }

    pub fn intersect(&self, other: &IntervalUnion) -> IntervalUnion {
        let mut parts = Vec::new();
        for p in &self.parts {
            for q in &other.parts {
                if let Some(x) = p.intersect(q) {
                    parts.push(x);
                }
            }
        }
        union_normalize(parts)
    }

    pub fn union(&self, other: &IntervalUnion) -> IntervalUnion {
        union_normalize(self.parts.iter().chain(other.parts.iter()).cloned().collect())
    }

    pub fn intersects_interval(&self, other: &Interval) -> bool {
        self.parts.iter().any(|p| p.intersects(other))
    }

    /// Hull of all parts, `None` when empty.
    pub fn hull(&self) -> Option<Interval> {
        let first = self.parts.first()?;
        let last = self.parts.last()?;
        Some(Interval {
            lo: first.lo.clone(),
            hi: last.hi.clone(),
            lo_closed: first.lo_closed,
            hi_closed: last.hi_closed,
        })
    }
}

impl fmt::Debug for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "∅");
        }
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Sort and merge overlapping or abutting parts. Two parts abut compatibly when
/// they share an endpoint that at least one of them contains.
pub fn union_normalize(mut parts: Vec<Interval>) -> IntervalUnion {
    parts.sort_by(|x, y| x.lo.cmp(&y.lo).then_with(|| y.lo_closed.cmp(&x.lo_closed)));
    let mut merged: Vec<Interval> = Vec::with_capacity(parts.len());
    for p in parts {
        if let Some(last) = merged.last_mut() {
            let joins = match p.lo.cmp(&last.hi) {
                Ordering::Less => true,
                Ordering::Equal => last.hi_closed || p.lo_closed,
                Ordering::Greater => false,
            };
            if joins {
                match p.hi.cmp(&last.hi) {
                    Ordering::Greater => {
                        last.hi = p.hi;
                        last.hi_closed = p.hi_closed;
                    }
                    Ordering::Equal => last.hi_closed |= p.hi_closed,
                    Ordering::Less => {}
                }
                continue;
            }
        }
        merged.push(p);
    }
    IntervalUnion { parts: merged }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn iv(s: &str) -> Interval {
        s.parse().unwrap()
    }

    #[test]
    fn affine_image_examples() {
        assert_eq!(iv("[0,1)").affine_image(&r("3"), &r("1")), iv("[1,4)"));
        assert_eq!(iv("(-1,1)").affine_image(&r("-2"), &r("0")), iv("(-2,2)"));
        assert_eq!(iv("[0,1)").affine_image(&r("-1"), &r("0")), iv("(-1,0]"));
        assert_eq!(iv("[2,5)").affine_image(&r("0"), &r("7")), Interval::point(r("7")));
    }

    #[test]
    fn preimage_inverts_image() {
        let i = iv("[1/3,2)");
        let a = r("-5/2");
        let v = r("3");
        let img = i.affine_image(&a, &v);
        assert_eq!(img.affine_preimage(&a, &v).unwrap(), i);
    }

    #[test]
    fn enclosure_contains_exact_image() {
        let a_enc = iv("[141/100, 142/100]");
        let img = iv("[0,1)").affine_image_enclosure(&a_enc, &r("1"));
        assert_eq!(img, iv("[1, 121/50]"));
    }

    #[test]
    fn intersection_and_closures() {
        assert_eq!(iv("[0,1)").intersect(&iv("[1,2)")), None);
        assert_eq!(iv("[0,1]").intersect(&iv("[1,2)")), Some(Interval::point(r("1"))));
        assert_eq!(iv("(-1,1)").intersect(&iv("[1/2,3]")), Some(iv("[1/2,1)")));
        assert!(iv("(0,1)").is_subset_of(&iv("[0,1)")));
        assert!(!iv("[0,1)").is_subset_of(&iv("(0,1)")));
    }

    #[test]
    fn invalid_intervals_rejected() {
        assert!(Interval::new(r("1"), r("0"), true, true).is_err());
        assert!(Interval::new(r("1"), r("1"), true, false).is_err());
        assert!(Interval::new(r("1"), r("1"), true, true).is_ok());
    }

    #[test]
    fn normalize_examples() {
        let u = union_normalize(vec![iv("[0,1)"), iv("[1,2)")]);
        assert_eq!(u.parts(), &[iv("[0,2)")]);
        let u = union_normalize(vec![iv("[1,3)"), iv("[0,2)")]);
        assert_eq!(u.parts(), &[iv("[0,3)")]);
        let u = union_normalize(vec![]);
        assert!(u.is_empty());
        assert_eq!(u.measure(), Rational::zero());
        // (0,1) and (1,2) do not abut compatibly: the point 1 is missing
        let u = union_normalize(vec![iv("(1,2)"), iv("(0,1)")]);
        assert_eq!(u.len(), 2);
        assert_eq!(u.measure(), r("2"));
    }

    #[test]
    fn sign_and_recip() {
        assert_eq!(iv("(0,1]").sign(), Some(1));
        assert_eq!(iv("[0,1]").sign(), None);
        assert_eq!(iv("[-2,-1/2]").recip().unwrap(), iv("[-2,-1/2]"));
        assert!(iv("[-1,1]").recip().is_err());
    }

    #[test]
    fn interval_serde_shape() {
        let i = iv("[0,1)");
        let json = serde_json::to_value(&i).unwrap();
        assert_eq!(json["lo"], "0");
        assert_eq!(json["hi_closed"], false);
        let back: Interval = serde_json::from_value(json).unwrap();
        assert_eq!(back, i);
        let bad = serde_json::json!({"lo":"2","hi":"1","lo_closed":true,"hi_closed":true});
        assert!(serde_json::from_value::<Interval>(bad).is_err());
    }
}
