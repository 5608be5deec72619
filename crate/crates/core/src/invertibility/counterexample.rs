use std::cmp::Ordering;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::InvError;
use crate::exactnum::{Interval, Rational};
use crate::sysmodel::{simulate_affine, Coefficient};

pub const DEFAULT_COUNTEREXAMPLE_LENGTH: usize = 20;

/// Two trajectories with different inputs and identical quantized outputs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleWitness {
    pub x0: Rational,
    pub x0_prime: Rational,
    pub inputs: Vec<Rational>,
    pub inputs_prime: Vec<Rational>,
    pub divergence_steps: Vec<usize>,
    #[serde(with = "crate::exactnum::int_serde::vec")]
    pub outputs: Vec<BigInt>,
}

impl CounterexampleWitness {
    /// Re-simulate both trajectories and check the witness claims.
    pub fn verify(&self, a: &Coefficient) -> Result<(), InvError> {
        let n = self.inputs.len();
        if self.inputs_prime.len() != n || self.divergence_steps.is_empty() {
            return Err(InvError::VerificationFailed("malformed witness".into()));
        }
        let t = simulate_affine(a, &self.x0, &self.inputs, n)?;
        let t2 = simulate_affine(a, &self.x0_prime, &self.inputs_prime, n)?;
        if t.outputs != t2.outputs || t.outputs != self.outputs {
            return Err(InvError::VerificationFailed("outputs differ".into()));
        }
        for k in 0..n {
            let differs = self.inputs[k] != self.inputs_prime[k];
            if differs != self.divergence_steps.contains(&k) {
                return Err(InvError::VerificationFailed(format!("divergence mismatch at step {k}")));
            }
        }
        Ok(())
    }
}

/// Build indistinguishable trajectories for `|a| > 2` by tracking the set of states
/// reachable under two different inputs within a single quantizer cell.
///
/// The inputs `u₁ ≠ u₂` are the first pair (in sorted order) with `|u₁ - u₂| < |a|`.
/// Starting from `S₀ = [0, 1)`, a diverging step keeps `(a·S + u₁) ∩ (a·S + u₂)` and
/// a regular step keeps `a·S + u₁`, each intersected with the cell of largest
/// measure (smallest index on ties). Divergence happens at step 0 and whenever the
/// set fills its cell again. Initial points are recovered backward from the
/// midpoint of the final set.
pub fn counterexample_expansive(
    a: &Coefficient,
    inputs: &[Rational],
    length: usize,
) -> Result<CounterexampleWitness, InvError> {
    let a = a
        .as_rational()
        .ok_or_else(|| InvError::NotApplicable("construction needs exact rational a".into()))?
        .clone();
    if a.abs() <= Rational::from(2) {
        return Err(InvError::NotApplicable(format!("|a| = {} is not greater than 2", a.abs())));
    }
    if length == 0 {
        return Err(InvError::InvalidArgument("length must be positive".into()));
    }
    let mut alphabet = inputs.to_vec();
    alphabet.sort();
    alphabet.dedup();
    let (u1, u2) = close_pair(&alphabet, &a.abs())
        .ok_or_else(|| InvError::NotApplicable(format!("no two inputs closer than |a| = {}", a.abs())))?;

    let one = Rational::one();
    let mut sets = vec![Interval::closed_open(Rational::zero(), one.clone())?];
    let mut diverge = Vec::with_capacity(length);
    for i in 0..length {
        let s = &sets[i];
        let d = s.length() == one;
        let image = s.affine_image(&a, &u1);
        let t = if d {
            image
                .intersect(&s.affine_image(&a, &u2))
                .ok_or(InvError::ConstructionStalled(i))?
        } else {
            image
        };
        let next = best_cell(&t);
        if !d && next.length() <= s.length() {
            return Err(InvError::ConstructionStalled(i));
        }
        diverge.push(d);
        sets.push(next);
    }

    let mut x = sets[length].midpoint();
    let mut x_prime = x.clone();
    let mut inputs_a = vec![u1.clone(); length];
    let mut inputs_b = vec![u1.clone(); length];
    for i in (0..length).rev() {
        let ub = if diverge[i] { &u2 } else { &u1 };
        inputs_b[i] = ub.clone();
        inputs_a[i] = u1.clone();
        x = &(&x - &u1) / &a;
        x_prime = &(&x_prime - ub) / &a;
    }
    let divergence_steps: Vec<usize> = (0..length).filter(|&i| diverge[i]).collect();
    let coeff = Coefficient::rational(a);
    let outputs = simulate_affine(&coeff, &x, &inputs_a, length)?.outputs;
    let witness = CounterexampleWitness {
        x0: x,
        x0_prime: x_prime,
        inputs: inputs_a,
        inputs_prime: inputs_b,
        divergence_steps,
        outputs,
    };
    witness.verify(&coeff)?;
    Ok(witness)
}

fn close_pair(alphabet: &[Rational], abs_a: &Rational) -> Option<(Rational, Rational)> {
    for (i, u1) in alphabet.iter().enumerate() {
        for u2 in &alphabet[i + 1..] {
            if (u1 - u2).abs() < *abs_a {
                return Some((u1.clone(), u2.clone()));
            }
        }
    }
    None
}

/// Intersection of `t` with the unit cell of largest measure, smallest index on ties.
fn best_cell(t: &Interval) -> Interval {
    let first = t.lo().floor();
    let last = t.hi().floor();
    let mut best: Option<Interval> = None;
    let mut n = first;
    while n <= last {
        if let Some(piece) = t.intersect(&Interval::cell(&n)) {
            let better = match &best {
                None => true,
                Some(b) => piece.length().cmp(&b.length()) == Ordering::Greater,
            };
            if better {
                best = Some(piece);
            }
        }
        n += 1;
    }
    best.expect("a nonempty interval meets some cell")
}
