//! Exact arithmetic substrate: rationals, integer and rational polynomials,
//! intervals with closure flags, real root isolation and algebraic numbers.

mod algebraic;
pub mod int_serde;
mod interval;
mod poly;
mod rational;
pub mod roots;

pub use algebraic::{make_algebraic, AlgebraicNumber};
pub use interval::{interval_affine_image, union_normalize, Interval, IntervalUnion};
pub use poly::{IntPolynomial, RationalPolynomial};
pub use rational::{rat_op, RatOp, RatOpResult, Rational};
pub use roots::isolate_real_roots;

use num_bigint::BigInt;
use thiserror::Error;

/// Environment variable overriding the default enclosure precision in bits.
pub const PRECISION_ENV: &str = "QUANTINV_PRECISION_BITS";

const DEFAULT_PRECISION_BITS: u32 = 64;

/// Default relative precision (bits) of algebraic-number enclosures.
pub fn default_precision_bits() -> u32 {
    std::env::var(PRECISION_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<u32>().ok())
        .filter(|&b| (8..=1 << 16).contains(&b))
        .unwrap_or(DEFAULT_PRECISION_BITS)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not primitive (content {0})")]
    NotPrimitive(BigInt),
    #[error("no root in the given interval")]
    NoRootInInterval,
    #[error("{0} roots in the given interval, expected exactly one")]
    MultipleRootsInInterval(usize),
    #[error("polynomial has the rational root {0}; supply rational values directly")]
    ReducibleByRationalRoot(Rational),
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("invalid interval {0}")]
    InvalidInterval(String),
    #[error("parse error: {0}")]
    Parse(String),
}
