use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::InvError;
use crate::exactnum::Rational;

/// Slope of the example family: exact rational or floating approximation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Tau {
    Exact(Rational),
    Approx(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExceptionalHit {
    pub q: u64,
    #[serde(with = "crate::exactnum::int_serde")]
    pub p: BigInt,
    /// Candidate `a = p/q`.
    pub a: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub tau: Tau,
    pub q_max: u64,
    pub hits: Vec<ExceptionalHit>,
    /// Distinct values of `1 - frac(τq)` for rational `τ`, in decreasing order.
    pub h_values: Option<Vec<Rational>>,
}

impl Classification {
    pub fn qs(&self) -> Vec<u64> {
        self.hits.iter().map(|h| h.q).collect()
    }
}

/// All `q ≤ q_max` with `1 - frac(τq) < q/(⌊τq⌋ + 1)`, each paired with `a = (⌊τq⌋ + 1)/q`.
pub fn classify_exceptional(tau: &Tau, q_max: u64) -> Result<Classification, InvError> {
    classify_with_threshold(tau, q_max, None)
}

/// As [`classify_exceptional`], keeping only hits with `1/p > theta` when a threshold is given.
pub fn classify_with_threshold(tau: &Tau, q_max: u64, theta: Option<&Rational>) -> Result<Classification, InvError> {
    if q_max == 0 {
        return Err(InvError::InvalidArgument("q_max must be at least 1".into()));
    }
    let mut hits = Vec::new();
    match tau {
        Tau::Exact(t) => {
            if !t.is_positive() {
                return Err(InvError::InvalidArgument("tau must be positive".into()));
            }
            for q in 1..=q_max {
                let tq = t * &Rational::from(q as i64);
                let p: BigInt = tq.floor() + 1;
                let lhs = &Rational::one() - &tq.frac();
                let rhs = Rational::new(BigInt::from(q), p.clone()).expect("p >= 1");
                if lhs < rhs {
                    hits.push(hit(q, p));
                }
            }
        }
        Tau::Approx(t) => {
            if !(t.is_finite() && *t > 0.0) {
                return Err(InvError::InvalidArgument("tau must be positive and finite".into()));
            }
            for q in 1..=q_max {
                let tq = t * q as f64;
                let n = tq.floor();
                let lhs = 1.0 - (tq - n);
                let rhs = q as f64 / (n + 1.0);
                if lhs < rhs {
                    hits.push(hit(q, BigInt::from(n as i64 + 1)));
                }
            }
        }
    }
    if let Some(theta) = theta {
        hits.retain(|h| Rational::new(1, h.p.clone()).expect("p >= 1") > *theta);
    }
    let h_values = match tau {
        Tau::Exact(t) => Some(h_values(t)),
        Tau::Approx(_) => None,
    };
    Ok(Classification { tau: tau.clone(), q_max, hits, h_values })
}

fn hit(q: u64, p: BigInt) -> ExceptionalHit {
    let a = Rational::new(p.clone(), BigInt::from(q)).expect("q >= 1");
    ExceptionalHit { q, p, a }
}

/// `1 - frac(τq)` over a full period `q = 1..=m` of `τ = l/m`.
fn h_values(t: &Rational) -> Vec<Rational> {
    let m: u64 = t.denom().try_into().unwrap_or(u64::MAX).min(1 << 20);
    let set: BTreeSet<Rational> =
        (1..=m).map(|q| &Rational::one() - &(t * &Rational::from(q as i64)).frac()).collect();
    set.into_iter().rev().collect()
}
