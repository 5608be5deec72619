use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::InvError;
use crate::exactnum::{IntPolynomial, Interval, Rational};
use crate::mahler::{binomial, mahler_double, mahler_half, MahlerResult};
use crate::sysmodel::Coefficient;

/// Computable upper bounds on ε(a).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpsilonBounds {
    pub min_poly: IntPolynomial,
    /// `min{1/|p|, 1/q}` for `a = p/q`.
    pub rational_bound: Option<Rational>,
    /// Enclosure of `1/M(P(x/2))`.
    pub mahler_half_bound: Interval,
    /// Enclosure of `1/M(2^{-K} P(2x))`.
    pub mahler_double_bound: Interval,
    /// `min_i C(K,i)·2^{min(i,K-i)} / |α_i|` over nonzero coefficients.
    pub coeff_bound: Rational,
    /// Smallest conservative value among the bounds above.
    pub best: Rational,
}

/// Primitive integer polynomial with positive leading coefficient vanishing at `a`.
pub fn minimal_polynomial(a: &Coefficient) -> IntPolynomial {
    match a {
        Coefficient::Algebraic(alg) if alg.as_rational().is_none() => alg.minimal_polynomial().clone(),
        _ => {
            let r = a.as_rational().expect("rational coefficient");
            IntPolynomial::new(vec![-r.numer().clone(), r.denom().clone()])
        }
    }
}

fn reciprocal(m: &MahlerResult) -> Result<Interval, InvError> {
    let lo = m.upper.recip()?;
    let hi = m.lower.recip()?;
    Ok(Interval::closed(lo, hi)?)
}

pub fn epsilon_bounds(a: &Coefficient) -> Result<EpsilonBounds, InvError> {
    let p = minimal_polynomial(a);
    let tol = Rational::pow2(-36);
    let mahler_half_bound = reciprocal(&mahler_half(&p, &tol)?)?;
    let mahler_double_bound = reciprocal(&mahler_double(&p, &tol)?)?;
    let k = p.degree();
    let coeff_bound = (0..=k)
        .filter(|&i| !p.coeff(i).is_zero())
        .map(|i| {
            let num = BigInt::from(binomial(k, i)) << i.min(k - i);
            Rational::new(num, p.coeff(i).abs()).expect("nonzero coefficient")
        })
        .min()
        .expect("nonzero polynomial");
    let rational_bound = a.as_rational().map(|r| {
        let q = Rational::new(1, r.denom().clone()).expect("positive denominator");
        if r.is_zero() {
            q
        } else {
            q.min(Rational::new(1, r.numer().abs()).expect("nonzero numerator"))
        }
    });
    let mut best = coeff_bound.clone().min(mahler_half_bound.hi().clone()).min(mahler_double_bound.hi().clone());
    if let Some(rb) = &rational_bound {
        best = best.min(rb.clone());
    }
    Ok(EpsilonBounds { min_poly: p, rational_bound, mahler_half_bound, mahler_double_bound, coeff_bound, best })
}
