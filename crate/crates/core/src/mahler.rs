//! Certified Mahler measures by Graeffe root-squaring.
//!
//! For a polynomial `R` of degree `q` the coefficient bounds
//!
//! ```text
//! max_i |r_i| / C(q, i)  ≤  M(R)  ≤  ‖R‖₂
//! ```
//!
//! bracket the measure, and the Graeffe transform `G` satisfies `M(G(R)) = M(R)²`.
//! Applying the bracket to `Gⁿ(R)` and taking `2ⁿ`-th roots narrows it to a relative
//! width of at most `(C(q,⌊q/2⌋)·√(q+1))^{2⁻ⁿ} − 1`, with no complex root finding.
//!
//! Coefficients stay exact until they exceed the working precision; after that they
//! are carried as integer intervals sharing a power-of-two scale, rounded outward,
//! so every reported bound is rigorous.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{IntPolynomial, Rational};

/// Default number of Graeffe steps before giving up.
pub const DEFAULT_MAX_ITERATIONS: u32 = 64;
/// Default mantissa size (bits) once coefficients leave exact mode.
pub const DEFAULT_PRECISION_BITS: u32 = 256;
const MAX_PRECISION_BITS: u32 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MahlerError {
    #[error("zero polynomial has no Mahler measure")]
    ZeroPolynomial,
    #[error("no convergence after {iterations} Graeffe steps: [{lower}, {upper}]")]
    NonConvergence {
        iterations: u32,
        lower: Rational,
        upper: Rational,
    },
}

/// Certified enclosure `lower ≤ M ≤ upper`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MahlerResult {
    pub lower: Rational,
    pub upper: Rational,
    pub iterations: u32,
}

impl MahlerResult {
    fn exact(v: Rational) -> Self {
        MahlerResult { lower: v.clone(), upper: v, iterations: 0 }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lower <= x && x <= &self.upper
    }

    pub fn width(&self) -> Rational {
        &self.upper - &self.lower
    }

    /// `(upper - lower) / upper`, zero for an exact result.
    pub fn relative_width(&self) -> Rational {
        if self.upper.is_zero() {
            return Rational::zero();
        }
        self.width() / self.upper.clone()
    }

    pub fn scale(&self, k: &Rational) -> MahlerResult {
        MahlerResult {
            lower: &self.lower * k,
            upper: &self.upper * k,
            iterations: self.iterations,
        }
    }

    pub fn overlaps(&self, lo: &Rational, hi: &Rational) -> bool {
        &self.lower <= hi && lo <= &self.upper
    }
}

#[derive(Debug, Clone, Copy)]
pub struct MahlerOptions {
    pub max_iterations: u32,
    pub precision_bits: u32,
}

impl Default for MahlerOptions {
    fn default() -> Self {
        MahlerOptions {
            max_iterations: DEFAULT_MAX_ITERATIONS,
            precision_bits: DEFAULT_PRECISION_BITS,
        }
    }
}

/// Exact norms entering the coefficient inequalities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormReport {
    pub inf_norm: Rational,
    pub l2_norm_sq: Rational,
    pub degree: usize,
    pub binomial_mid: Rational,
}

pub fn norm_report(p: &IntPolynomial) -> NormReport {
    let q = p.degree();
    NormReport {
        inf_norm: Rational::from_integer(p.inf_norm()),
        l2_norm_sq: Rational::from_integer(p.l2_norm_sq()),
        degree: q,
        binomial_mid: Rational::from_integer(BigInt::from(binomial(q, q / 2))),
    }
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    let k = k.min(n - k.min(n));
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Enclosure of `M(P)` with relative width at most `tol`.
pub fn mahler_measure(p: &IntPolynomial, tol: &Rational) -> Result<MahlerResult, MahlerError> {
    mahler_measure_with(p, tol, &MahlerOptions::default())
}

/// Enclosure of `M(P(x/2)) = |r_q|·Π max(1/2, |ρ_j|)`, computed as `2^{-q}·M(2^q P(x/2))`.
pub fn mahler_half(p: &IntPolynomial, tol: &Rational) -> Result<MahlerResult, MahlerError> {
    if p.is_zero() {
        return Err(MahlerError::ZeroPolynomial);
    }
    let q = p.degree() as i64;
    Ok(mahler_measure(&p.halve_argument_integral(), tol)?.scale(&Rational::pow2(-q)))
}

/// Enclosure of `M(2^{-K} P(2x))`, computed as `2^{-K}·M(P(2x))`.
pub fn mahler_double(p: &IntPolynomial, tol: &Rational) -> Result<MahlerResult, MahlerError> {
    if p.is_zero() {
        return Err(MahlerError::ZeroPolynomial);
    }
    let k = p.degree() as i64;
    Ok(mahler_measure(&p.scale_argument_pow2(1), tol)?.scale(&Rational::pow2(-k)))
}

pub fn mahler_measure_with(
    p: &IntPolynomial,
    tol: &Rational,
    opts: &MahlerOptions,
) -> Result<MahlerResult, MahlerError> {
    if p.is_zero() {
        return Err(MahlerError::ZeroPolynomial);
    }
    let (_, p) = p.strip_zero_roots();
    if p.degree() == 0 {
        return Ok(MahlerResult::exact(Rational::from_integer(p.coeff(0).abs())));
    }
    let mut precision = opts.precision_bits.max(64);
    loop {
        match bracket(&p, tol, opts.max_iterations, precision) {
            Outcome::Converged(r) => return Ok(r),
            Outcome::PrecisionExhausted if precision < MAX_PRECISION_BITS => precision *= 2,
            Outcome::IterationCap(r) if precision >= MAX_PRECISION_BITS => {
                return Err(MahlerError::NonConvergence {
                    iterations: r.iterations,
                    lower: r.lower,
                    upper: r.upper,
                });
            }
            Outcome::PrecisionExhausted | Outcome::IterationCap(_) => {
                // one final attempt at the highest precision reports the best bracket
                return match bracket(&p, tol, opts.max_iterations, MAX_PRECISION_BITS.max(precision)) {
                    Outcome::Converged(r) => Ok(r),
                    Outcome::IterationCap(r) => Err(MahlerError::NonConvergence {
                        iterations: r.iterations,
                        lower: r.lower,
                        upper: r.upper,
                    }),
                    Outcome::PrecisionExhausted => unreachable!("maximum precision never retries"),
                };
            }
        }
    }
}

enum Outcome {
    Converged(MahlerResult),
    IterationCap(MahlerResult),
    PrecisionExhausted,
}

fn bracket(p: &IntPolynomial, tol: &Rational, max_iterations: u32, precision: u32) -> Outcome {
    let q = p.degree();
    let binoms: Vec<BigUint> = (0..=q).map(|i| binomial(q, i)).collect();
    let mut coeffs = ScaledCoeffs::exact(p);
    let mut best_lo = Rational::zero();
    let mut best_hi: Option<Rational> = None;
    for n in 0..=max_iterations {
        if n > 0 {
            coeffs = coeffs.graeffe();
            coeffs.normalize(precision);
            if coeffs.precision_lost() {
                if precision < MAX_PRECISION_BITS {
                    return Outcome::PrecisionExhausted;
                }
                let upper = best_hi.clone().expect("set on the first iteration");
                return Outcome::IterationCap(MahlerResult { lower: best_lo, upper, iterations: n - 1 });
            }
        }
        let (lo, hi) = coeffs.measure_bracket(&binoms, n, precision);
        if lo > best_lo {
            best_lo = lo;
        }
        best_hi = Some(match best_hi {
            Some(h) if h <= hi => h,
            _ => hi,
        });
        let hi = best_hi.clone().expect("set above");
        let result = MahlerResult { lower: best_lo.clone(), upper: hi, iterations: n };
        if result.relative_width() <= *tol {
            return Outcome::Converged(result);
        }
        if n == max_iterations {
            return Outcome::IterationCap(result);
        }
    }
    unreachable!("loop returns on the final iteration")
}

/// Coefficient intervals `[lo_i, hi_i]·2^exp`. Exact mode has `lo == hi`.
#[derive(Clone, Debug)]
struct ScaledCoeffs {
    lo: Vec<BigInt>,
    hi: Vec<BigInt>,
    exp: i128,
}

impl ScaledCoeffs {
    fn exact(p: &IntPolynomial) -> Self {
        ScaledCoeffs { lo: p.coeffs().to_vec(), hi: p.coeffs().to_vec(), exp: 0 }
    }

    fn degree(&self) -> usize {
        self.lo.len() - 1
    }

    /// One Graeffe step: coefficients of `(-1)^q P(x) P(-x)` in `x²`.
    fn graeffe(&self) -> ScaledCoeffs {
        let q = self.degree();
        let mut lo = Vec::with_capacity(q + 1);
        let mut hi = Vec::with_capacity(q + 1);
        for k in 0..=q {
            let (mut s_lo, mut s_hi) = square(&self.lo[k], &self.hi[k]);
            if k % 2 == 1 {
                (s_lo, s_hi) = (-s_hi, -s_lo);
            }
            let start = (2 * k).saturating_sub(q);
            for i in start..k {
                let j = 2 * k - i;
                let (p_lo, p_hi) = product(&self.lo[i], &self.hi[i], &self.lo[j], &self.hi[j]);
                let (p_lo, p_hi) = (p_lo << 1usize, p_hi << 1usize);
                if j % 2 == 0 {
                    s_lo += p_lo;
                    s_hi += p_hi;
                } else {
                    s_lo -= p_hi;
                    s_hi -= p_lo;
                }
            }
            if q % 2 == 1 {
                (s_lo, s_hi) = (-s_hi, -s_lo);
            }
            lo.push(s_lo);
            hi.push(s_hi);
        }
        ScaledCoeffs { lo, hi, exp: 2 * self.exp }
    }

    /// Drop low-order bits beyond `precision`, rounding outward.
    fn normalize(&mut self, precision: u32) {
        let bits = self
            .lo
            .iter()
            .chain(self.hi.iter())
            .map(|c| c.bits())
            .max()
            .unwrap_or(0);
        let keep = precision as u64 + 32;
        if bits <= keep {
            return;
        }
        let shift = bits - precision as u64;
        let d = BigInt::one() << shift;
        for c in &mut self.lo {
            *c = c.div_floor(&d);
        }
        for c in &mut self.hi {
            *c = -((-&*c).div_floor(&d));
        }
        self.exp += shift as i128;
    }

    /// True once the dominant coefficient is no longer known to 32 bits.
    fn precision_lost(&self) -> bool {
        let (idx, mag) = self
            .lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| l.abs().max(h.abs()))
            .enumerate()
            .max_by(|a, b| a.1.cmp(&b.1))
            .expect("nonempty");
        if mag.is_zero() {
            return true;
        }
        let width = &self.hi[idx] - &self.lo[idx];
        (width << 32usize) > mag
    }

    /// Enclosure of `M(P)` from the bracket on `M(Gⁿ P) = M(P)^{2ⁿ}`.
    fn measure_bracket(&self, binoms: &[BigUint], n: u32, precision: u32) -> (Rational, Rational) {
        let prec = precision as u64;
        // lower: max_i mig_i / C(q,i), rounded down
        let mut lower_mant = BigUint::zero();
        for (i, b) in binoms.iter().enumerate() {
            let mig = mignitude(&self.lo[i], &self.hi[i]);
            let m = (mig << prec) / b;
            if m > lower_mant {
                lower_mant = m;
            }
        }
        let mut lower = Dyadic { mant: lower_mant, exp: self.exp - prec as i128 };
        for _ in 0..n {
            lower = lower.sqrt(prec, Rounding::Down);
        }
        // upper: ‖·‖₂ = sqrt(Σ mag²), so M ≤ (Σ mag²)^{2^{-(n+1)}}, rounded up
        let sum_sq: BigUint = self
            .lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| {
                let m = magnitude(l, h);
                &m * &m
            })
            .sum();
        let mut upper = Dyadic { mant: sum_sq, exp: 2 * self.exp };
        for _ in 0..=n {
            upper = upper.sqrt(prec, Rounding::Up);
        }
        (lower.to_rational(), upper.to_rational())
    }
}

fn square(lo: &BigInt, hi: &BigInt) -> (BigInt, BigInt) {
    if lo == hi {
        let s = lo * lo;
        return (s.clone(), s);
    }
    let a = lo * lo;
    let b = hi * hi;
    if lo.sign() != Sign::Plus && hi.sign() != Sign::Minus {
        (BigInt::zero(), a.max(b))
    } else if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn product(a_lo: &BigInt, a_hi: &BigInt, b_lo: &BigInt, b_hi: &BigInt) -> (BigInt, BigInt) {
    if a_lo == a_hi && b_lo == b_hi {
        let p = a_lo * b_lo;
        return (p.clone(), p);
    }
    let cands = [a_lo * b_lo, a_lo * b_hi, a_hi * b_lo, a_hi * b_hi];
    let mn = cands.iter().min().expect("nonempty").clone();
    let mx = cands.iter().max().expect("nonempty").clone();
    (mn, mx)
}

fn mignitude(lo: &BigInt, hi: &BigInt) -> BigUint {
    if lo.sign() != Sign::Plus && hi.sign() != Sign::Minus {
        return BigUint::zero();
    }
    lo.magnitude().min(hi.magnitude()).clone()
}

fn magnitude(lo: &BigInt, hi: &BigInt) -> BigUint {
    lo.magnitude().max(hi.magnitude()).clone()
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Rounding {
    Down,
    Up,
}

/// Non-negative dyadic `mant · 2^exp`.
#[derive(Clone, Debug)]
struct Dyadic {
    mant: BigUint,
    exp: i128,
}

impl Dyadic {
    /// Square root with at least `prec` bits, rounded in the given direction.
    fn sqrt(&self, prec: u64, rounding: Rounding) -> Dyadic {
        if self.mant.is_zero() {
            return self.clone();
        }
        let bits = self.mant.bits();
        let mut shift = (2 * prec).saturating_sub(bits) as i128;
        // shrink oversized mantissas first (only when rounding down is safe for the direction)
        if bits > 2 * prec + 64 {
            let drop = (bits - 2 * prec) as i128;
            let drop = if (self.exp + drop) % 2 != 0 { drop - 1 } else { drop };
            let d = BigUint::one() << drop as u64;
            let (quot, rem) = self.mant.div_rem(&d);
            let mant = match rounding {
                Rounding::Down => quot,
                Rounding::Up if rem.is_zero() => quot,
                Rounding::Up => quot + 1u32,
            };
            return Dyadic { mant, exp: self.exp + drop }.sqrt(prec, rounding);
        }
        if (self.exp - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let m = &self.mant << shift as u64;
        let r = m.sqrt();
        let r = if rounding == Rounding::Up && &r * &r != m { r + 1u32 } else { r };
        Dyadic { mant: r, exp: (self.exp - shift) / 2 }
    }

    fn to_rational(&self) -> Rational {
        let n = BigInt::from(self.mant.clone());
        if self.exp >= 0 {
            Rational::from_integer(n << self.exp as u64)
        } else {
            Rational::new(n, BigInt::one() << (-self.exp) as u64).expect("nonzero denominator")
        }
    }
}

/// Outcome of checking one coefficient inequality against certified enclosures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundCheck {
    /// Holds using the unfavourable side of every enclosure.
    Certified,
    /// Enclosures overlap the boundary (equality cases); not refuted.
    Consistent,
    /// Certified violation.
    Violated,
}

impl BoundCheck {
    pub fn passed(self) -> bool {
        self != BoundCheck::Violated
    }

    /// Classify `lhs ≤ rhs` from enclosures of both sides.
    fn of(lhs_lo: &Rational, lhs_hi: &Rational, rhs_lo: &Rational, rhs_hi: &Rational) -> Self {
        if lhs_hi <= rhs_lo {
            BoundCheck::Certified
        } else if lhs_lo > rhs_hi {
            BoundCheck::Violated
        } else {
            BoundCheck::Consistent
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientBoundReport {
    /// `|r_i| ≤ C(q,i)·M(R)` for every `i`.
    pub coefficient: BoundCheck,
    /// `‖R‖∞ ≤ C(q,⌊q/2⌋)·M(R)`.
    pub inf_norm: BoundCheck,
    /// `M(R) ≤ 2^q·M(R(x/2))`.
    pub half_scaling: BoundCheck,
    pub measure: MahlerResult,
    pub measure_half: MahlerResult,
}

impl CoefficientBoundReport {
    pub fn all_passed(&self) -> bool {
        self.coefficient.passed() && self.inf_norm.passed() && self.half_scaling.passed()
    }
}

/// Check the three coefficient/measure inequalities on `P`.
pub fn verify_coefficient_bounds(p: &IntPolynomial) -> Result<CoefficientBoundReport, MahlerError> {
    let tol = Rational::pow2(-30);
    let measure = mahler_measure(p, &tol)?;
    let measure_half = mahler_half(p, &tol)?;
    let q = p.degree();
    let coefficient = (0..=q)
        .map(|i| {
            let c = Rational::from_integer(p.coeff(i).abs());
            let b = Rational::from_integer(BigInt::from(binomial(q, i)));
            BoundCheck::of(&c, &c, &(&b * &measure.lower), &(&b * &measure.upper))
        })
        .max_by_key(|c| match c {
            BoundCheck::Certified => 0,
            BoundCheck::Consistent => 1,
            BoundCheck::Violated => 2,
        })
        .expect("nonzero polynomial has coefficients");
    let norms = norm_report(p);
    let inf_norm = BoundCheck::of(
        &norms.inf_norm,
        &norms.inf_norm,
        &(&norms.binomial_mid * &measure.lower),
        &(&norms.binomial_mid * &measure.upper),
    );
    let scale = Rational::pow2(q as i64);
    let half_scaling = BoundCheck::of(
        &measure.lower,
        &measure.upper,
        &(&scale * &measure_half.lower),
        &(&scale * &measure_half.upper),
    );
    Ok(CoefficientBoundReport { coefficient, inf_norm, half_scaling, measure, measure_half })
}

/// Exact Graeffe transform `G(P)(x²) = (-1)^q P(x) P(-x)`.
pub fn graeffe_step(p: &IntPolynomial) -> IntPolynomial {
    if p.is_zero() {
        return p.clone();
    }
    let g = ScaledCoeffs::exact(p).graeffe();
    IntPolynomial::new(g.lo)
}
