//! Independent ground truth at small scale: exhaustive pair search over shared
//! output cells, banded coefficient matrices and fractional-part density probes.

mod bruteforce;
mod kronecker;
mod psi;

pub use bruteforce::{
    bruteforce_indistinguishable, BruteforceOptions, BruteforceOutcome, BruteforceWitness, Exhaustion, PairBox,
    DEFAULT_DEPTH_CAP,
};
pub use kronecker::{kronecker_density_probe, probe_period, DensityProbe};
pub use psi::{check_minor_gcd, manifold_membership, psi_matrix, MinorGcd, PsiMatrix};

use num_bigint::BigInt;
use thiserror::Error;

use crate::exactnum::ExactError;
use crate::sysmodel::SysError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("exact search needs a rational coefficient")]
    NotRational,
    #[error("depth {depth} exceeds the cap {cap}")]
    DepthCapExceeded { depth: usize, cap: usize },
    #[error("reachable cells leave the window [{lo}, {hi}] without a witness")]
    CellWindowExceeded { lo: BigInt, hi: BigInt },
    #[error("polynomial is not primitive (content {0})")]
    NotPrimitive(BigInt),
    #[error("expected a vector of dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Sys(#[from] SysError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}
