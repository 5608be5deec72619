pub mod exactnum;
pub mod invertibility;
pub mod mahler;
pub mod oracle;
pub mod report;
pub mod sysmodel;

pub use exactnum::{make_algebraic, AlgebraicNumber, ExactError, IntPolynomial, Interval, IntervalUnion, Rational};
pub use invertibility::{
    analyze, analyze_detailed, classify_exceptional, counterexample_expansive, epsilon_bounds, invariant_orbit_search,
    invert_sequence, not_uli_via_orbit, uldi_check, AnalyzeOptions, EpsilonBounds, InvError, Tau, UldiStatus,
    UldiVerdict, UliStatus, UliVerdict,
};
pub use mahler::{mahler_measure, MahlerError, MahlerResult};
pub use oracle::{
    bruteforce_indistinguishable, check_minor_gcd, kronecker_density_probe, manifold_membership, psi_matrix,
    BruteforceOutcome, DensityProbe, OracleError, PsiMatrix,
};
pub use report::{AnalysisReport, ReportOptions};
pub use sysmodel::{Coefficient, NormalizedSystem, QuantizedSystem, SysError};
