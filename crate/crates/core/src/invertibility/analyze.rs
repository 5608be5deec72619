use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{
    counterexample_expansive, epsilon_bounds, not_uli_via_orbit, uldi_check, CounterexampleWitness, EpsilonBounds,
    InvError, OrbitCertificate, UldiStatus, UldiVerdict, DEFAULT_COUNTEREXAMPLE_LENGTH, DEFAULT_MAX_FIXPOINT_ITERS,
    DEFAULT_MAX_PERIOD,
};
use crate::exactnum::Rational;
use crate::sysmodel::{Coefficient, QuantizedSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum UliStatus {
    UliOneStep,
    NotUli,
    UndecidedGap,
    UnsupportedContractive,
}

/// Instantiated gap inequality `|a| - ε̄ ≤ min|v| - 1 ≤ |a|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapReport {
    pub a: Coefficient,
    pub eps_bar: Option<Rational>,
    pub min_v_minus_one: Rational,
    pub lower_holds: Option<bool>,
    pub upper_holds: bool,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum UliEvidence {
    Uldi(UldiVerdict),
    /// Singleton alphabet: no pair of distinct inputs exists.
    Vacuous,
    Orbit(OrbitCertificate),
    Counterexample(CounterexampleWitness),
    Gap(GapReport),
    Contractive { a: Coefficient },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UliVerdict {
    pub status: UliStatus,
    pub evidence: UliEvidence,
    /// Distinguishability time.
    pub k: Option<usize>,
    /// Waiting time.
    pub l: Option<usize>,
    /// Length of the NOT-ULI witness.
    pub witness_length: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalyzeOptions {
    pub counterexample_length: usize,
    pub max_period: usize,
    pub max_fixpoint_iters: usize,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            counterexample_length: DEFAULT_COUNTEREXAMPLE_LENGTH,
            max_period: DEFAULT_MAX_PERIOD,
            max_fixpoint_iters: DEFAULT_MAX_FIXPOINT_ITERS,
        }
    }
}

impl UliVerdict {
    fn decided(status: UliStatus, evidence: UliEvidence, witness_length: Option<usize>) -> Self {
        let (k, l) = if status == UliStatus::UliOneStep { (Some(1), Some(0)) } else { (None, None) };
        UliVerdict { status, evidence, k, l, witness_length }
    }
}

/// Decision chain: contractive screen, one-step test, expansive counterexample,
/// orbit certificate on the ε̄-shrunk interval, otherwise the gap report.
pub fn analyze(sys: &QuantizedSystem, opts: &AnalyzeOptions) -> UliVerdict {
    analyze_detailed(sys, opts).uli
}

/// Verdict together with the intermediate one-step and ε̄ results.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetailedAnalysis {
    pub uli: UliVerdict,
    pub uldi: Option<UldiVerdict>,
    pub epsilon: Option<EpsilonBounds>,
}

pub fn analyze_detailed(sys: &QuantizedSystem, opts: &AnalyzeOptions) -> DetailedAnalysis {
    let (uli, uldi, epsilon) = chain(sys, opts);
    DetailedAnalysis { uli, uldi, epsilon }
}

fn chain(sys: &QuantizedSystem, opts: &AnalyzeOptions) -> (UliVerdict, Option<UldiVerdict>, Option<EpsilonBounds>) {
    let norm = sys.normalize();
    let a = norm.a().clone();
    let diff = norm.difference_system();
    let eps = epsilon_bounds(&a);
    let eps_ok = eps.as_ref().ok().cloned();
    if a.abs_cmp(&Rational::one()) == Ordering::Less {
        let v = UliVerdict::decided(UliStatus::UnsupportedContractive, UliEvidence::Contractive { a }, None);
        return (v, uldi_check(norm.a(), &diff.diff_inputs).ok(), eps_ok);
    }
    let uldi = match uldi_check(&a, &diff.diff_inputs) {
        Ok(u) => u,
        Err(InvError::EmptyNonzeroV) => {
            return (UliVerdict::decided(UliStatus::UliOneStep, UliEvidence::Vacuous, None), None, eps_ok);
        }
        Err(e) => {
            let gap = gap_report(&a, None, &Rational::zero(), vec![e.to_string()]);
            return (UliVerdict::decided(UliStatus::UndecidedGap, UliEvidence::Gap(gap), None), None, eps_ok);
        }
    };
    if uldi.status == UldiStatus::UldiOneStep {
        let v = UliVerdict::decided(UliStatus::UliOneStep, UliEvidence::Uldi(uldi.clone()), None);
        return (v, Some(uldi), eps_ok);
    }
    let mut diagnostics = Vec::new();
    if a.abs_cmp(&Rational::from(2)) == Ordering::Greater {
        match counterexample_expansive(&a, norm.inputs(), opts.counterexample_length) {
            Ok(w) => {
                let n = w.inputs.len();
                let v = UliVerdict::decided(UliStatus::NotUli, UliEvidence::Counterexample(w), Some(n));
                return (v, Some(uldi), eps_ok);
            }
            Err(e) => diagnostics.push(format!("counterexample: {e}")),
        }
    } else {
        diagnostics.push("counterexample: |a| <= 2".into());
    }
    match &eps {
        Ok(bounds) => {
            match not_uli_via_orbit(&a, &diff.diff_inputs, bounds, opts.max_period, opts.max_fixpoint_iters) {
                Ok(Some(cert)) => {
                    let n = cert.cycle.as_ref().map(|c| c.period);
                    let v = UliVerdict::decided(UliStatus::NotUli, UliEvidence::Orbit(cert), n);
                    return (v, Some(uldi), eps_ok);
                }
                Ok(None) => diagnostics.push("orbit: no periodic witness in the shrunk interval".into()),
                Err(e) => diagnostics.push(format!("orbit: {e}")),
            }
        }
        Err(e) => diagnostics.push(format!("epsilon: {e}")),
    }
    let slack = &uldi.min_nonzero_v - &Rational::one();
    let gap = gap_report(&a, eps_ok.as_ref().map(|e| e.best.clone()), &slack, diagnostics);
    (UliVerdict::decided(UliStatus::UndecidedGap, UliEvidence::Gap(gap), None), Some(uldi), eps_ok)
}

fn gap_report(a: &Coefficient, eps_bar: Option<Rational>, slack: &Rational, diagnostics: Vec<String>) -> GapReport {
    let lower_holds = eps_bar.as_ref().map(|e| {
        let bound = slack + e;
        !bound.is_negative() && a.abs_cmp(&bound) != Ordering::Greater
    });
    let upper_holds = slack.is_negative() || a.abs_cmp(slack) != Ordering::Less;
    GapReport { a: a.clone(), eps_bar, min_v_minus_one: slack.clone(), lower_holds, upper_holds, diagnostics }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn sys(a: &str, inputs: &[&str]) -> QuantizedSystem {
        QuantizedSystem::unit(r(a).into(), inputs.iter().map(|s| r(s)).collect()).unwrap()
    }

    #[test]
    fn uldi_system() {
        let v = analyze(&sys("3/2", &["0", "3"]), &AnalyzeOptions::default());
        assert_eq!(v.status, UliStatus::UliOneStep);
        assert_eq!((v.k, v.l), (Some(1), Some(0)));
    }

    #[test]
    fn counterexample_system() {
        let v = analyze(&sys("3", &["0", "1"]), &AnalyzeOptions::default());
        assert_eq!(v.status, UliStatus::NotUli);
        assert!(matches!(v.evidence, UliEvidence::Counterexample(_)));
        assert_eq!(v.witness_length, Some(DEFAULT_COUNTEREXAMPLE_LENGTH));
    }

    #[test]
    fn orbit_system() {
        let v = analyze(&sys("10/9", &["0", "1/2"]), &AnalyzeOptions::default());
        assert_eq!(v.status, UliStatus::NotUli);
        assert!(matches!(v.evidence, UliEvidence::Orbit(_)));
    }

    #[test]
    fn gap_system() {
        let v = analyze(&sys("1", &["0", "1"]), &AnalyzeOptions::default());
        assert_eq!(v.status, UliStatus::UndecidedGap);
        match v.evidence {
            UliEvidence::Gap(g) => {
                assert_eq!(g.eps_bar, Some(r("1")));
                assert_eq!(g.min_v_minus_one, r("0"));
                assert_eq!(g.lower_holds, Some(true));
                assert!(g.upper_holds);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn contractive_and_vacuous() {
        let v = analyze(&sys("1/2", &["0", "1"]), &AnalyzeOptions::default());
        assert_eq!(v.status, UliStatus::UnsupportedContractive);
        let v = analyze(&sys("3", &["5"]), &AnalyzeOptions::default());
        assert_eq!(v.status, UliStatus::UliOneStep);
        assert_eq!(v.evidence, UliEvidence::Vacuous);
    }

    #[test]
    fn verdict_round_trips() {
        for s in [sys("3", &["0", "1"]), sys("10/9", &["0", "1/2"]), sys("1", &["0", "1"]), sys("3/2", &["0", "3"])] {
            let v = analyze(&s, &AnalyzeOptions::default());
            let text = serde_json::to_string(&v).unwrap();
            let back: UliVerdict = serde_json::from_str(&text).unwrap();
            assert_eq!(back, v);
        }
    }
}
