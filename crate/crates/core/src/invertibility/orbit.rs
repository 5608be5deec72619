use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{EpsilonBounds, InvError};
use crate::exactnum::{union_normalize, Interval, IntervalUnion, Rational};
use crate::sysmodel::{Coefficient, State};

pub const DEFAULT_MAX_PERIOD: usize = 8;
pub const DEFAULT_MAX_FIXPOINT_ITERS: usize = 64;
const MAX_PIECES: usize = 4096;
const ENCLOSURE_BITS: u32 = 96;
const MAX_ENCLOSURE_BITS: u32 = 1536;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum OrbitKind {
    EmptyCertified,
    PeriodicWitness,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitCycle {
    pub word: Vec<Rational>,
    pub z_star: State,
    pub period: usize,
    /// `z*` followed by its next `period - 1` iterates.
    pub points: Vec<State>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitCertificate {
    pub kind: OrbitKind,
    pub target: Interval,
    pub cycle: Option<OrbitCycle>,
    pub fixpoint_iterations: usize,
}

/// Search for a difference orbit confined to `target` that uses some nonzero input.
///
/// Periodic words are enumerated by increasing period with forward interval pruning;
/// the witness returned has minimal period, then minimal `z*`, then the
/// lexicographically smallest word. Without a witness, the backward iteration
/// `K ← target ∩ ⋃_v (K - v)/a` is run and the result is certified empty once no
/// nonzero `v` maps a point of `K` back into `K`.
pub fn invariant_orbit_search(
    a: &Coefficient,
    diff_inputs: &[Rational],
    target: &Interval,
    max_period: usize,
    max_fixpoint_iters: usize,
) -> Result<OrbitCertificate, InvError> {
    if a.abs_cmp(&Rational::one()) != Ordering::Greater {
        return Err(InvError::ContractiveUnsupported);
    }
    let mut vs = diff_inputs.to_vec();
    vs.sort();
    vs.dedup();
    for period in 1..=max_period {
        if let Some(cycle) = periodic_witness(a, &vs, target, period) {
            return Ok(OrbitCertificate {
                kind: OrbitKind::PeriodicWitness,
                target: target.clone(),
                cycle: Some(cycle),
                fixpoint_iterations: 0,
            });
        }
    }
    let (emptied, iterations) = backward_fixpoint(a, &vs, target, max_fixpoint_iters);
    Ok(OrbitCertificate {
        kind: if emptied { OrbitKind::EmptyCertified } else { OrbitKind::Unknown },
        target: target.clone(),
        cycle: None,
        fixpoint_iterations: iterations,
    })
}

/// Periodic search on `(-1 + ε̄, 1 - ε̄)`; `Some` only for a periodic witness.
pub fn not_uli_via_orbit(
    a: &Coefficient,
    diff_inputs: &[Rational],
    eps: &EpsilonBounds,
    max_period: usize,
    max_fixpoint_iters: usize,
) -> Result<Option<OrbitCertificate>, InvError> {
    let half = &Rational::one() - &eps.best;
    if !half.is_positive() {
        return Err(InvError::IntervalEmpty(eps.best.clone()));
    }
    let target = Interval::open(-&half, half)?;
    let cert = invariant_orbit_search(a, diff_inputs, &target, max_period, max_fixpoint_iters)?;
    Ok((cert.kind == OrbitKind::PeriodicWitness).then_some(cert))
}

struct Candidate {
    key: Rational,
    word: Vec<Rational>,
    points: Vec<State>,
}

fn periodic_witness(a: &Coefficient, vs: &[Rational], target: &Interval, period: usize) -> Option<OrbitCycle> {
    let a_enc = a.enclosure_with_bits(ENCLOSURE_BITS);
    let mut best: Option<Candidate> = None;
    let mut word = Vec::with_capacity(period);
    dfs(a, &a_enc, vs, target, target.clone(), period, &mut word, &mut best);
    best.map(|c| OrbitCycle { z_star: c.points[0].clone(), word: c.word, period, points: c.points })
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    a: &Coefficient,
    a_enc: &Interval,
    vs: &[Rational],
    target: &Interval,
    reach: Interval,
    period: usize,
    word: &mut Vec<Rational>,
    best: &mut Option<Candidate>,
) {
    if word.len() == period {
        if word.iter().all(Rational::is_zero) {
            return;
        }
        if let Some(points) = cycle_points(a, word, target) {
            let key = match &points[0] {
                State::Exact(z) => z.clone(),
                State::Enclosure(iv) => iv.midpoint(),
            };
            let better = match best {
                None => true,
                Some(b) => (&key, &*word) < (&b.key, &b.word),
            };
            if better {
                *best = Some(Candidate { key, word: word.clone(), points });
            }
        }
        return;
    }
    for v in vs {
        let image = reach.affine_image_enclosure(a_enc, v);
        let image = if a_enc.is_point() { image } else { image.round_outward(ENCLOSURE_BITS + 32) };
        if let Some(next) = image.intersect(target) {
            word.push(v.clone());
            dfs(a, a_enc, vs, target, next, period, word, best);
            word.pop();
        }
    }
}

/// Fixed point of each rotation of `word`, if all lie strictly inside `target`.
fn cycle_points(a: &Coefficient, word: &[Rational], target: &Interval) -> Option<Vec<State>> {
    let l = word.len();
    if let Some(a) = a.as_rational() {
        let denom = &Rational::one() - &a.pow(l as u32);
        let mut points = Vec::with_capacity(l);
        for shift in 0..l {
            let c = (0..l).fold(Rational::zero(), |c, i| &(a * &c) + &word[(shift + i) % l]);
            let z = &c / &denom;
            if !target.contains(&z) {
                return None;
            }
            points.push(State::Exact(z));
        }
        return Some(points);
    }
    let mut bits = ENCLOSURE_BITS;
    'refine: while bits <= MAX_ENCLOSURE_BITS {
        let a_enc = a.enclosure_with_bits(bits);
        let mut a_pow = Interval::point(Rational::one());
        for _ in 0..l {
            a_pow = a_pow.mul(&a_enc);
        }
        let denom = Interval::point(Rational::one()).sub(&a_pow);
        let mut points = Vec::with_capacity(l);
        for shift in 0..l {
            let c = (0..l).fold(Interval::point(Rational::zero()), |c, i| {
                c.mul(&a_enc).add(&Interval::point(word[(shift + i) % l].clone()))
            });
            let z = c.div(&denom).ok()?.round_outward(bits + 16);
            if !z.is_subset_of(target) {
                if z.intersects(target) {
                    bits *= 2;
                    continue 'refine;
                }
                return None;
            }
            points.push(State::Enclosure(z));
        }
        return Some(points);
    }
    None
}

/// Returns `(certified empty, iterations used)`.
fn backward_fixpoint(a: &Coefficient, vs: &[Rational], target: &Interval, max_iters: usize) -> (bool, usize) {
    let a_enc = a.enclosure_with_bits(ENCLOSURE_BITS);
    let exact = a_enc.is_point();
    let nonzero: Vec<&Rational> = vs.iter().filter(|v| !v.is_zero()).collect();
    let mut k = IntervalUnion::from_interval(target.clone());
    for n in 0..=max_iters {
        if k.is_empty() || !reenters(&k, &a_enc, &nonzero, exact) {
            return (true, n);
        }
        if n == max_iters || k.len() > MAX_PIECES {
            return (false, n);
        }
        let mut parts = Vec::with_capacity(k.len() * vs.len());
        for part in k.parts() {
            for v in vs {
                let pre = part.affine_preimage_enclosure(&a_enc, v).expect("|a| > 1 excludes 0");
                let pre = if exact { pre } else { pre.round_outward(ENCLOSURE_BITS + 32) };
                if let Some(p) = pre.intersect(target) {
                    parts.push(p);
                }
            }
        }
        let next = union_normalize(parts);
        if next == k {
            return (false, n);
        }
        k = next;
    }
    unreachable!("loop returns at n = max_iters")
}

/// Does some nonzero `v` map a point of `k` into `k`?
fn reenters(k: &IntervalUnion, a_enc: &Interval, nonzero: &[&Rational], exact: bool) -> bool {
    nonzero.iter().any(|v| {
        let image = union_normalize(
            k.parts()
                .iter()
                .map(|p| {
                    let im = p.affine_image_enclosure(a_enc, v);
                    if exact { im } else { im.round_outward(ENCLOSURE_BITS + 32) }
                })
                .collect(),
        );
        !image.intersect(k).is_empty()
    })
}
