//! Quantized scalar plant `x⁺ = a·x + b·u`, `y = ⌊c·x/δ⌋`, its normalized form
//! and the associated difference system.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{default_precision_bits, AlgebraicNumber, ExactError, Interval, Rational};

/// Refinement budget (bits) for deciding outputs of algebraic trajectories.
pub const OUTPUT_BUDGET_BITS: u32 = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SysError {
    #[error("input alphabet is empty")]
    EmptyAlphabet,
    #[error("duplicate input {0}")]
    DuplicateInput(Rational),
    #[error("delta must be positive, got {0}")]
    NonPositiveDelta(Rational),
    #[error("gain {0} must be nonzero")]
    ZeroGain(&'static str),
    #[error("input {0} is not in the alphabet")]
    InputNotInAlphabet(Rational),
    #[error("{needed} inputs needed, {given} given")]
    InputsTooShort { needed: usize, given: usize },
    #[error("output at step {step} undecided within {bits} bits")]
    IndeterminateOutput { step: usize, bits: u32 },
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("malformed system description: {0}")]
    Format(String),
}

/// Dynamics coefficient.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Coefficient {
    Rational { value: Rational },
    Algebraic(AlgebraicNumber),
}

impl Coefficient {
    pub fn rational(value: Rational) -> Self {
        Coefficient::Rational { value }
    }

    /// The exact value when rational (including algebraic numbers of degree 1).
    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Coefficient::Rational { value } => Some(value),
            Coefficient::Algebraic(a) => a.as_rational(),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    /// Closed enclosure with `2^-bits` relative width; a point for rational values.
    pub fn enclosure_with_bits(&self, bits: u32) -> Interval {
        match self {
            Coefficient::Rational { value } => Interval::point(value.clone()),
            Coefficient::Algebraic(a) => a.enclosure_with_bits(bits),
        }
    }

    pub fn enclosure(&self) -> Interval {
        self.enclosure_with_bits(default_precision_bits())
    }

    /// Exact comparison of `|a|` with a non-negative rational.
    pub fn abs_cmp(&self, r: &Rational) -> Ordering {
        match self {
            Coefficient::Rational { value } => value.abs().cmp(r),
            Coefficient::Algebraic(a) => a.abs_cmp_rational(r),
        }
    }

    pub fn signum(&self) -> i32 {
        match self {
            Coefficient::Rational { value } => value.signum(),
            Coefficient::Algebraic(a) => a.signum(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Coefficient::Rational { value } => value.to_f64(),
            Coefficient::Algebraic(a) => a.to_f64(),
        }
    }
}

impl From<Rational> for Coefficient {
    fn from(value: Rational) -> Self {
        Coefficient::Rational { value }
    }
}

impl From<AlgebraicNumber> for Coefficient {
    fn from(a: AlgebraicNumber) -> Self {
        match a.as_rational() {
            Some(r) => Coefficient::Rational { value: r.clone() },
            None => Coefficient::Algebraic(a),
        }
    }
}

impl fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Rational { value } => write!(f, "{value}"),
            Coefficient::Algebraic(a) => write!(f, "{a:?}"),
        }
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Plant with quantizer of rate `delta` and finite input alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSystem")]
pub struct QuantizedSystem {
    a: Coefficient,
    b: Rational,
    c: Rational,
    delta: Rational,
    inputs: Vec<Rational>,
}

#[derive(Deserialize)]
struct RawSystem {
    a: RawCoefficient,
    #[serde(default = "Rational::one")]
    b: Rational,
    #[serde(default = "Rational::one")]
    c: Rational,
    #[serde(default = "Rational::one")]
    delta: Rational,
    inputs: Vec<Rational>,
}

impl TryFrom<RawSystem> for QuantizedSystem {
    type Error = SysError;
    fn try_from(raw: RawSystem) -> Result<Self, SysError> {
        let a = match raw.a {
            RawCoefficient::Plain(r) => r.into(),
            RawCoefficient::Tagged(c) => c,
        };
        QuantizedSystem::new(a, raw.b, raw.c, raw.delta, raw.inputs)
    }
}

/// Accepts `"3/2"` as shorthand for a rational coefficient.
#[derive(Deserialize)]
#[serde(untagged)]
enum RawCoefficient {
    Plain(Rational),
    Tagged(Coefficient),
}

fn check_alphabet(inputs: &[Rational]) -> Result<(), SysError> {
    if inputs.is_empty() {
        return Err(SysError::EmptyAlphabet);
    }
    let mut seen = BTreeSet::new();
    for u in inputs {
        if !seen.insert(u) {
            return Err(SysError::DuplicateInput(u.clone()));
        }
    }
    Ok(())
}

impl QuantizedSystem {
    pub fn new(
        a: Coefficient,
        b: Rational,
        c: Rational,
        delta: Rational,
        inputs: Vec<Rational>,
    ) -> Result<Self, SysError> {
        check_alphabet(&inputs)?;
        if !delta.is_positive() {
            return Err(SysError::NonPositiveDelta(delta));
        }
        if b.is_zero() {
            return Err(SysError::ZeroGain("b"));
        }
        if c.is_zero() {
            return Err(SysError::ZeroGain("c"));
        }
        Ok(QuantizedSystem { a, b, c, delta, inputs })
    }

    /// System with `b = c = δ = 1`.
    pub fn unit(a: Coefficient, inputs: Vec<Rational>) -> Result<Self, SysError> {
        QuantizedSystem::new(a, Rational::one(), Rational::one(), Rational::one(), inputs)
    }

    pub fn from_json(text: &str) -> Result<Self, SysError> {
        serde_json::from_str(text).map_err(|e| SysError::Format(e.to_string()))
    }

    pub fn a(&self) -> &Coefficient {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    pub fn delta(&self) -> &Rational {
        &self.delta
    }

    pub fn inputs(&self) -> &[Rational] {
        &self.inputs
    }

    /// Quantizer index `⌊c·x/δ⌋` of a state.
    pub fn output(&self, x: &Rational) -> BigInt {
        (&(&self.c * x) / &self.delta).floor()
    }

    /// Substitute `x̂ = c·x/δ`, turning each input `u` into `(c·b/δ)·u`.
    pub fn normalize(&self) -> NormalizedSystem {
        let scale = &(&self.c * &self.b) / &self.delta;
        let mut inputs: Vec<Rational> = self.inputs.iter().map(|u| &scale * u).collect();
        inputs.sort();
        NormalizedSystem { a: self.a.clone(), inputs, input_scale: scale, state_scale: &self.c / &self.delta }
    }
}

/// `x⁺ = a·x + u`, `y = ⌊x⌋`, together with the substitution that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizedSystem {
    a: Coefficient,
    inputs: Vec<Rational>,
    /// Factor `c·b/δ` applied to every input.
    input_scale: Rational,
    /// Factor `c/δ` mapping original states to normalized ones.
    state_scale: Rational,
}

impl NormalizedSystem {
    pub fn new(a: Coefficient, mut inputs: Vec<Rational>) -> Result<Self, SysError> {
        check_alphabet(&inputs)?;
        inputs.sort();
        Ok(NormalizedSystem { a, inputs, input_scale: Rational::one(), state_scale: Rational::one() })
    }

    pub fn a(&self) -> &Coefficient {
        &self.a
    }

    /// Sorted normalized alphabet.
    pub fn inputs(&self) -> &[Rational] {
        &self.inputs
    }

    pub fn input_scale(&self) -> &Rational {
        &self.input_scale
    }

    pub fn state_scale(&self) -> &Rational {
        &self.state_scale
    }

    pub fn difference_system(&self) -> DifferenceSystem {
        DifferenceSystem { a: self.a.clone(), diff_inputs: difference_alphabet(&self.inputs) }
    }

    /// Trajectory driven by alphabet inputs.
    pub fn simulate(&self, x0: &Rational, inputs: &[Rational], n: usize) -> Result<Trajectory, SysError> {
        if let Some(u) = inputs.iter().take(n).find(|u| self.inputs.binary_search(u).is_err()) {
            return Err(SysError::InputNotInAlphabet((*u).clone()));
        }
        simulate_affine(&self.a, x0, inputs, n)
    }
}

/// `z⁺ = a·z + v` with `v ∈ 𝒰 − 𝒰`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferenceSystem {
    pub a: Coefficient,
    pub diff_inputs: Vec<Rational>,
}

impl DifferenceSystem {
    /// Smallest nonzero `|v|`, if any.
    pub fn min_nonzero_abs(&self) -> Option<Rational> {
        self.diff_inputs.iter().filter(|v| !v.is_zero()).map(Rational::abs).min()
    }
}

/// All pairwise differences, sorted and deduplicated.
pub fn difference_alphabet(inputs: &[Rational]) -> Vec<Rational> {
    let set: BTreeSet<Rational> =
        inputs.iter().flat_map(|u| inputs.iter().map(move |w| u - w)).collect();
    set.into_iter().collect()
}

/// Exact state or closed enclosure of it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum State {
    Exact(Rational),
    Enclosure(Interval),
}

impl State {
    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            State::Exact(r) => Some(r),
            State::Enclosure(_) => None,
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        match self {
            State::Exact(r) => r == x,
            State::Enclosure(iv) => iv.contains(x),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trajectory {
    pub states: Vec<State>,
    #[serde(with = "crate::exactnum::int_serde::vec")]
    pub outputs: Vec<BigInt>,
    pub inputs_used: Vec<Rational>,
}

impl Trajectory {
    /// Exact states, when the coefficient was rational.
    pub fn exact_states(&self) -> Option<Vec<Rational>> {
        self.states.iter().map(|s| s.as_exact().cloned()).collect()
    }
}

/// Iterate `x ↦ a·x + u_k` for `n` steps without an alphabet check
/// (difference-system runs feed arbitrary `v`).
pub fn simulate_affine(a: &Coefficient, x0: &Rational, inputs: &[Rational], n: usize) -> Result<Trajectory, SysError> {
    simulate_with_budget(a, x0, inputs, n, OUTPUT_BUDGET_BITS)
}

pub fn simulate_with_budget(
    a: &Coefficient,
    x0: &Rational,
    inputs: &[Rational],
    n: usize,
    budget_bits: u32,
) -> Result<Trajectory, SysError> {
    if inputs.len() < n {
        return Err(SysError::InputsTooShort { needed: n, given: inputs.len() });
    }
    let inputs_used = inputs[..n].to_vec();
    if let Some(a) = a.as_rational() {
        let mut states = Vec::with_capacity(n + 1);
        let mut x = x0.clone();
        states.push(x.clone());
        for u in &inputs_used {
            x = &(a * &x) + u;
            states.push(x.clone());
        }
        let outputs = states.iter().map(Rational::floor).collect();
        let states = states.into_iter().map(State::Exact).collect();
        return Ok(Trajectory { states, outputs, inputs_used });
    }
    let mut bits = default_precision_bits().min(budget_bits);
    loop {
        match enclosure_run(a, x0, &inputs_used, bits) {
            Ok((states, outputs)) => {
                let states = states.into_iter().map(State::Enclosure).collect();
                return Ok(Trajectory { states, outputs, inputs_used });
            }
            Err(step) if bits >= budget_bits => {
                return Err(SysError::IndeterminateOutput { step, bits });
            }
            Err(_) => bits = (bits * 2).min(budget_bits),
        }
    }
}

/// Enclosure trajectory; `Err(step)` at the first enclosure straddling a cell boundary.
fn enclosure_run(
    a: &Coefficient,
    x0: &Rational,
    inputs: &[Rational],
    bits: u32,
) -> Result<(Vec<Interval>, Vec<BigInt>), usize> {
    let a_enc = a.enclosure_with_bits(bits);
    let mut x = Interval::point(x0.clone());
    let mut states = vec![x.clone()];
    let mut outputs = vec![x0.floor()];
    for (k, u) in inputs.iter().enumerate() {
        x = x.affine_image_enclosure(&a_enc, u).round_outward(bits + 32);
        outputs.push(enclosure_cell(&x).ok_or(k + 1)?);
        states.push(x.clone());
    }
    Ok((states, outputs))
}

/// The unique cell `[n, n+1)` containing the interval, if any.
pub fn enclosure_cell(iv: &Interval) -> Option<BigInt> {
    let n = iv.lo().floor();
    let top = Rational::from_integer(&n + 1);
    (iv.hi() < &top || (iv.hi() == &top && !iv.hi_closed())).then_some(n)
}
