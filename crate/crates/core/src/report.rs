use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::invertibility::{
    analyze_detailed, AnalyzeOptions, EpsilonBounds, UldiStatus, UldiVerdict, UliEvidence, UliStatus, UliVerdict,
};
use crate::oracle::{bruteforce_indistinguishable, BruteforceOptions, BruteforceOutcome};
use crate::sysmodel::{NormalizedSystem, QuantizedSystem};

pub const DEFAULT_CROSSCHECK_DEPTH: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCrosscheck {
    pub depth: usize,
    pub outcome: Option<BruteforceOutcome>,
    pub error: Option<String>,
    /// Whether the oracle agrees with a decided verdict; absent when undecided.
    pub consistent: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageTiming {
    pub stage: String,
    pub micros: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub system: NormalizedSystem,
    pub uldi: Option<UldiVerdict>,
    pub epsilon: Option<EpsilonBounds>,
    pub uli: UliVerdict,
    pub oracle_crosscheck: Option<OracleCrosscheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Vec<StageTiming>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ReportOptions {
    pub analyze: AnalyzeOptions,
    pub crosscheck_depth: Option<usize>,
    pub timings: bool,
}

impl AnalysisReport {
    pub fn build(sys: &QuantizedSystem, opts: &ReportOptions) -> Self {
        let mut timings = Vec::new();
        let start = Instant::now();
        let system = sys.normalize();
        let detailed = analyze_detailed(sys, &opts.analyze);
        timings.push(stage("analyze", start));
        let oracle_crosscheck = opts.crosscheck_depth.map(|depth| {
            let start = Instant::now();
            let check = crosscheck(&system, depth, detailed.uli.status);
            timings.push(stage("bruteforce", start));
            check
        });
        AnalysisReport {
            system,
            uldi: detailed.uldi,
            epsilon: detailed.epsilon,
            uli: detailed.uli,
            oracle_crosscheck,
            timings: opts.timings.then_some(timings),
        }
    }

    /// Line-oriented `key: value` rendering with exact rationals.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let s = &self.system;
        let inputs: Vec<String> = s.inputs().iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "a: {}", s.a());
        let _ = writeln!(out, "inputs: {}", inputs.join(", "));
        let _ = writeln!(out, "status: {}", status_name(self.uli.status));
        let _ = writeln!(out, "evidence: {}", evidence_name(&self.uli.evidence));
        if let (Some(k), Some(l)) = (self.uli.k, self.uli.l) {
            let _ = writeln!(out, "k: {k}");
            let _ = writeln!(out, "l: {l}");
        }
        if let Some(n) = self.uli.witness_length {
            let _ = writeln!(out, "witness_length: {n}");
        }
        if let Some(u) = &self.uldi {
            let _ = writeln!(out, "uldi: {}", uldi_name(u.status));
            let _ = writeln!(out, "min_nonzero_v: {}", u.min_nonzero_v);
        }
        if let Some(e) = &self.epsilon {
            if let Some(r) = &e.rational_bound {
                let _ = writeln!(out, "epsilon.rational_bound: {r}");
            }
            let _ = writeln!(out, "epsilon.mahler_half_bound: {}", e.mahler_half_bound);
            let _ = writeln!(out, "epsilon.mahler_double_bound: {}", e.mahler_double_bound);
            let _ = writeln!(out, "epsilon.coeff_bound: {}", e.coeff_bound);
            let _ = writeln!(out, "epsilon.best: {}", e.best);
        }
        if let UliEvidence::Gap(g) = &self.uli.evidence {
            let _ = writeln!(out, "gap.min_v_minus_one: {}", g.min_v_minus_one);
            let _ = writeln!(out, "gap.lower_holds: {}", fmt_opt(g.lower_holds));
            let _ = writeln!(out, "gap.upper_holds: {}", g.upper_holds);
            for d in &g.diagnostics {
                let _ = writeln!(out, "gap.diagnostic: {d}");
            }
        }
        if let Some(c) = &self.oracle_crosscheck {
            let outcome = match (&c.outcome, &c.error) {
                (Some(BruteforceOutcome::Witness(_)), _) => "witness".to_string(),
                (Some(BruteforceOutcome::Exhausted(_)), _) => format!("exhausted (certified at depth {})", c.depth),
                (None, Some(e)) => format!("error: {e}"),
                (None, None) => "none".to_string(),
            };
            let _ = writeln!(out, "oracle: {outcome}");
            let _ = writeln!(out, "oracle.consistent: {}", fmt_opt(c.consistent));
        }
        if let Some(ts) = &self.timings {
            for t in ts {
                let _ = writeln!(out, "timing.{}: {} us", t.stage, t.micros);
            }
        }
        out
    }
}

fn crosscheck(sys: &NormalizedSystem, depth: usize, status: UliStatus) -> OracleCrosscheck {
    match bruteforce_indistinguishable(sys, depth, &BruteforceOptions::default()) {
        Ok(outcome) => {
            let consistent = match (status, &outcome) {
                (UliStatus::UliOneStep, o) => Some(matches!(o, BruteforceOutcome::Exhausted(_))),
                (UliStatus::NotUli, o) => Some(matches!(o, BruteforceOutcome::Witness(_))),
                _ => None,
            };
            OracleCrosscheck { depth, outcome: Some(outcome), error: None, consistent }
        }
        Err(e) => OracleCrosscheck { depth, outcome: None, error: Some(e.to_string()), consistent: None },
    }
}

fn stage(name: &str, start: Instant) -> StageTiming {
    StageTiming { stage: name.into(), micros: start.elapsed().as_micros() as u64 }
}

fn fmt_opt(b: Option<bool>) -> String {
    b.map_or_else(|| "unknown".into(), |b| b.to_string())
}

pub fn status_name(s: UliStatus) -> &'static str {
    match s {
        UliStatus::UliOneStep => "ULI_ONE_STEP",
        UliStatus::NotUli => "NOT_ULI",
        UliStatus::UndecidedGap => "UNDECIDED_GAP",
        UliStatus::UnsupportedContractive => "UNSUPPORTED_CONTRACTIVE",
    }
}

fn uldi_name(s: UldiStatus) -> &'static str {
    match s {
        UldiStatus::UldiOneStep => "ULDI_ONE_STEP",
        UldiStatus::NotUldi => "NOT_ULDI",
    }
}

fn evidence_name(e: &UliEvidence) -> &'static str {
    match e {
        UliEvidence::Uldi(_) => "uldi",
        UliEvidence::Vacuous => "vacuous",
        UliEvidence::Orbit(_) => "orbit",
        UliEvidence::Counterexample(_) => "counterexample",
        UliEvidence::Gap(_) => "gap",
        UliEvidence::Contractive { .. } => "contractive",
    }
}
