//! Invertibility verdicts for normalized quantized systems: the one-step
//! difference test, ε(a) upper bounds, orbit certificates, constructive
//! counterexamples, input reconstruction and the exceptional-a classifier.

mod analyze;
mod classify;
mod counterexample;
mod epsilon;
mod invert;
mod orbit;
mod uldi;

pub use analyze::{analyze, analyze_detailed, AnalyzeOptions, DetailedAnalysis, GapReport, UliEvidence, UliStatus, UliVerdict};
pub use classify::{classify_exceptional, classify_with_threshold, Classification, ExceptionalHit, Tau};
pub use counterexample::{counterexample_expansive, CounterexampleWitness, DEFAULT_COUNTEREXAMPLE_LENGTH};
pub use epsilon::{epsilon_bounds, minimal_polynomial, EpsilonBounds};
pub use invert::invert_sequence;
pub use orbit::{
    invariant_orbit_search, not_uli_via_orbit, OrbitCertificate, OrbitCycle, OrbitKind, DEFAULT_MAX_FIXPOINT_ITERS,
    DEFAULT_MAX_PERIOD,
};
pub use uldi::{uldi_check, Cycle, UldiStatus, UldiVerdict};

use thiserror::Error;

use crate::exactnum::{ExactError, Rational};
use crate::mahler::MahlerError;
use crate::sysmodel::SysError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvError {
    #[error("difference alphabet has no nonzero element")]
    EmptyNonzeroV,
    #[error("contractive coefficient |a| <= 1 is not supported here")]
    ContractiveUnsupported,
    #[error("shrunk interval is empty (epsilon bound {0} >= 1)")]
    IntervalEmpty(Rational),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("set construction stalled at step {0}")]
    ConstructionStalled(usize),
    #[error("no input is consistent with outputs at step {0}")]
    NoConsistentInput(usize),
    #[error("several inputs are consistent with outputs at step {0}")]
    AmbiguousInput(usize),
    #[error("system is not one-step D-invertible")]
    NotUldi,
    #[error("witness failed verification: {0}")]
    VerificationFailed(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Mahler(#[from] MahlerError),
    #[error(transparent)]
    Sys(#[from] SysError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}
