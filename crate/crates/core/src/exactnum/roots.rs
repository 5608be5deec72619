//! Real root isolation by Sturm sequences and exact bisection.

use num_traits::{Signed, Zero};

use super::{ExactError, IntPolynomial, Interval, Rational, RationalPolynomial};

/// Sturm chain of a squarefree polynomial.
#[derive(Clone, Debug)]
pub struct SturmChain {
    chain: Vec<RationalPolynomial>,
}

impl SturmChain {
    pub fn new(p: &RationalPolynomial) -> Self {
        let mut chain = vec![p.clone(), p.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]).expect("nonzero divisor");
            if r.is_zero() {
                break;
            }
            chain.push(r.neg());
        }
        SturmChain { chain }
    }

    fn variations(&self, x: &Rational) -> usize {
        let mut count = 0;
        let mut last = 0;
        for p in &self.chain {
            let s = p.eval(x).signum();
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Number of distinct real roots in the half-open range `(lo, hi]`.
    pub fn count_roots(&self, lo: &Rational, hi: &Rational) -> usize {
        self.variations(lo).saturating_sub(self.variations(hi))
    }

    pub fn polynomial(&self) -> &RationalPolynomial {
        &self.chain[0]
    }
}

/// Squarefree part `P / gcd(P, P')` as a rational polynomial.
pub fn squarefree_part(p: &IntPolynomial) -> RationalPolynomial {
    let rp = p.to_rational();
    let g = rp.gcd(&rp.derivative());
    if g.degree() == 0 {
        return rp;
    }
    rp.div_rem(&g).expect("nonzero gcd").0
}

/// Strict upper bound on the modulus of every complex root (Cauchy).
pub fn cauchy_bound(p: &RationalPolynomial) -> Rational {
    let lc = p.leading().abs();
    let m = p.coeffs()[..p.degree()]
        .iter()
        .map(|c| c.abs() / lc.clone())
        .max()
        .unwrap_or_else(Rational::zero);
    &m + &Rational::one()
}

/// Number of distinct real roots of `p` in the closed interval `[lo, hi]`.
pub fn count_roots_closed(p: &IntPolynomial, lo: &Rational, hi: &Rational) -> Result<usize, ExactError> {
    if p.is_zero() {
        return Err(ExactError::ZeroPolynomial);
    }
    let sturm = SturmChain::new(&squarefree_part(p));
    let at_lo = usize::from(p.eval(lo).is_zero());
    Ok(sturm.count_roots(lo, hi) + at_lo)
}

/// Pairwise-disjoint closed rational intervals, each holding exactly one real root of `p`
/// and together holding all of them, in increasing order.
///
/// An interval is a point exactly when it pins a rational root; otherwise `p` changes
/// sign strictly between its endpoints.
pub fn isolate_real_roots(p: &IntPolynomial) -> Result<Vec<Interval>, ExactError> {
    if p.is_zero() {
        return Err(ExactError::ZeroPolynomial);
    }
    if p.degree() == 0 {
        return Ok(Vec::new());
    }
    let sf = squarefree_part(p);
    let sturm = SturmChain::new(&sf);
    let bound = cauchy_bound(&sf);
    let mut out = Vec::new();
    isolate_in(&sturm, &(-&bound), &bound, &mut out);
    Ok(out)
}

/// Isolate roots in `(lo, hi]`; `lo` is never a root by construction.
fn isolate_in(sturm: &SturmChain, lo: &Rational, hi: &Rational, out: &mut Vec<Interval>) {
    let n = sturm.count_roots(lo, hi);
    if n == 0 {
        return;
    }
    let poly = sturm.polynomial();
    if n == 1 {
        if poly.eval(hi).is_zero() {
            out.push(Interval::point(hi.clone()));
        } else {
            out.push(Interval::closed(lo.clone(), hi.clone()).expect("lo < hi"));
        }
        return;
    }
    let mid = lo.midpoint(hi);
    if !poly.eval(&mid).is_zero() {
        isolate_in(sturm, lo, &mid, out);
        isolate_in(sturm, &mid, hi, out);
        return;
    }
    // The midpoint is itself a root: peel it off with root-free margins on both sides.
    let mut delta = (&mid - lo) / Rational::from(2);
    let (left, right) = loop {
        let l = &mid - &delta;
        let r = &mid + &delta;
        if !poly.eval(&l).is_zero() && !poly.eval(&r).is_zero() && sturm.count_roots(&l, &r) == 1 {
            break (l, r);
        }
        delta = delta / Rational::from(2);
    };
    isolate_in(sturm, lo, &left, out);
    out.push(Interval::point(mid));
    isolate_in(sturm, &right, hi, out);
}

/// Bisect a sign-changing interval of `p` until its width is at most `width`.
/// Returns a point interval if an exact rational root is hit.
pub fn refine_root(p: &IntPolynomial, iv: &Interval, width: &Rational) -> Interval {
    if iv.is_point() {
        return iv.clone();
    }
    let mut lo = iv.lo().clone();
    let mut hi = iv.hi().clone();
    let s_lo = p.sign_at(&lo);
    if s_lo == 0 {
        return Interval::point(lo);
    }
    if p.sign_at(&hi) == 0 {
        return Interval::point(hi);
    }
    while &(&hi - &lo) > width {
        let mid = lo.midpoint(&hi);
        let s = p.sign_at(&mid);
        if s == 0 {
            return Interval::point(mid);
        }
        if s == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Interval::closed(lo, hi).expect("lo < hi")
}

/// Every rational root of `p`, by the rational root theorem restricted to the
/// isolating intervals.
pub fn rational_roots(p: &IntPolynomial) -> Result<Vec<Rational>, ExactError> {
    let isolated = isolate_real_roots(p)?;
    let (_, stripped) = p.strip_zero_roots();
    let mut roots = Vec::new();
    if stripped.degree() < p.degree() {
        roots.push(Rational::zero());
    }
    if stripped.degree() == 0 {
        return Ok(roots);
    }
    let lead = stripped.leading().abs();
    let divisors = divisors_of(&lead);
    for iv in isolated {
        if iv.is_point() {
            if !iv.lo().is_zero() {
                roots.push(iv.lo().clone());
            }
            continue;
        }
        // a root n/d with d | lead lies in iv; two such candidates are ≥ 1/lead² apart
        let narrow = refine_root(p, &iv, &Rational::new(1, &lead * &lead * 2).expect("nonzero"));
        if narrow.is_point() {
            roots.push(narrow.lo().clone());
            continue;
        }
        'outer: for d in &divisors {
            let dr = Rational::from_integer(d.clone());
            let lo = (narrow.lo() * &dr).floor();
            let hi = (narrow.hi() * &dr).ceil();
            let mut n = lo;
            while n <= hi {
                let cand = Rational::new(n.clone(), d.clone()).expect("nonzero");
                if narrow.contains(&cand) && stripped.eval(&cand).is_zero() {
                    roots.push(cand);
                    break 'outer;
                }
                n += 1;
            }
        }
    }
    roots.sort();
    Ok(roots)
}

fn divisors_of(n: &num_bigint::BigInt) -> Vec<num_bigint::BigInt> {
    use num_bigint::BigInt;
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::from(1);
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            small.push(d.clone());
            let other = n / &d;
            if other != d {
                large.push(other);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}
