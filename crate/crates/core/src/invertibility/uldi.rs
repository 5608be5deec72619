use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::InvError;
use crate::exactnum::{Interval, Rational};
use crate::sysmodel::{Coefficient, State};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum UldiStatus {
    UldiOneStep,
    NotUldi,
}

/// Periodic difference orbit `points[k+1] = a·points[k] + word[k]` (indices mod period).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cycle {
    pub points: Vec<State>,
    pub word: Vec<Rational>,
    pub v: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UldiVerdict {
    pub status: UldiStatus,
    pub min_nonzero_v: Rational,
    pub witness: Option<Cycle>,
}

/// One-step test `min_{v≠0} |v| ≥ |a| + 1`, with a short cycle in `(-1, 1)` when it fails.
///
/// For `a ≥ 0` the cycle is the 2-cycle `∓v/(a+1)` driven by `(v, -v)`; for `a < 0`
/// it is the fixed point `v/(1-a)`.
pub fn uldi_check(a: &Coefficient, diff_inputs: &[Rational]) -> Result<UldiVerdict, InvError> {
    let m = diff_inputs
        .iter()
        .filter(|v| !v.is_zero())
        .map(Rational::abs)
        .min()
        .ok_or(InvError::EmptyNonzeroV)?;
    let slack = &m - &Rational::one();
    let uldi = !slack.is_negative() && a.abs_cmp(&slack) != Ordering::Greater;
    if uldi {
        return Ok(UldiVerdict { status: UldiStatus::UldiOneStep, min_nonzero_v: m, witness: None });
    }
    let witness = short_cycle(a, &m)?;
    Ok(UldiVerdict { status: UldiStatus::NotUldi, min_nonzero_v: m, witness: Some(witness) })
}

fn short_cycle(a: &Coefficient, v: &Rational) -> Result<Cycle, InvError> {
    let unit = Interval::open(-Rational::one(), Rational::one())?;
    let negative = a.signum() < 0;
    let word = if negative { vec![v.clone()] } else { vec![v.clone(), -v] };
    if let Some(a) = a.as_rational() {
        let points = if negative {
            vec![v / &(&Rational::one() - a)]
        } else {
            let z = v / &(a + &Rational::one());
            vec![-&z, z]
        };
        debug_assert!(points.iter().all(|z| unit.contains(z)));
        return Ok(Cycle { points: points.into_iter().map(State::Exact).collect(), word, v: v.clone() });
    }
    let one = Interval::point(Rational::one());
    let vi = Interval::point(v.clone());
    let mut bits = 64;
    loop {
        let a_enc = a.enclosure_with_bits(bits);
        let points = if negative {
            vec![vi.div(&one.sub(&a_enc))?]
        } else {
            let z = vi.div(&a_enc.add(&one))?;
            vec![z.neg(), z]
        };
        if points.iter().all(|z| z.is_subset_of(&unit)) {
            let points = points.into_iter().map(|z| State::Enclosure(z.round_outward(bits + 8))).collect();
            return Ok(Cycle { points, word, v: v.clone() });
        }
        if bits >= 4096 {
            return Err(InvError::VerificationFailed("cycle enclosure does not separate from ±1".into()));
        }
        bits *= 2;
    }
}
