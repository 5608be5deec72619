mod parse;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use quantinv_core::exactnum::Rational;
use quantinv_core::invertibility::{
    classify_with_threshold, counterexample_expansive, epsilon_bounds, invariant_orbit_search, invert_sequence,
    AnalyzeOptions, InvError, UliStatus, DEFAULT_COUNTEREXAMPLE_LENGTH, DEFAULT_MAX_FIXPOINT_ITERS,
    DEFAULT_MAX_PERIOD,
};
use quantinv_core::mahler::{mahler_double, mahler_half, mahler_measure, norm_report, verify_coefficient_bounds};
use quantinv_core::oracle::{bruteforce_indistinguishable, kronecker_density_probe, BruteforceOptions};
use quantinv_core::report::{AnalysisReport, ReportOptions, DEFAULT_CROSSCHECK_DEPTH};
use quantinv_core::sysmodel::{Coefficient, QuantizedSystem};

const EXIT_GAP: u8 = 2;
const EXIT_CONTRACTIVE: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_INTERNAL: u8 = 70;

#[derive(Parser)]
#[command(name = "quantinv", version)]
#[command(about = "Invertibility analysis for quantized scalar systems x+ = a x + u")]
struct Cli {
    /// Write the report to this path instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Decide ULI for a system file (exit 0 decided, 2 undecided gap, 3 contractive)
    Analyze {
        /// System description (JSON)
        file: PathBuf,
        /// Run the brute-force oracle after the analysis
        #[arg(long)]
        crosscheck: bool,
        /// Oracle depth used with --crosscheck
        #[arg(long, default_value_t = DEFAULT_CROSSCHECK_DEPTH)]
        depth: usize,
        /// Largest period enumerated by the orbit search
        #[arg(long, default_value_t = DEFAULT_MAX_PERIOD)]
        max_period: usize,
        /// Backward fixpoint iteration budget
        #[arg(long, default_value_t = DEFAULT_MAX_FIXPOINT_ITERS)]
        max_iters: usize,
        /// Counterexample length for |a| > 2
        #[arg(long, default_value_t = DEFAULT_COUNTEREXAMPLE_LENGTH)]
        length: usize,
        /// Include per-stage durations in the report
        #[arg(long)]
        timings: bool,
    },
    /// Upper bounds on the density constant of a (rational or alg:c0,c1,...@lo,hi)
    Epsilon {
        #[arg(value_parser = parse::coefficient, allow_hyphen_values = true)]
        a: Coefficient,
    },
    /// Mahler measure enclosure of an integer polynomial given as c0,c1,...
    Mahler {
        #[arg(allow_hyphen_values = true)]
        coeffs: String,
        /// Relative tolerance of the enclosure
        #[arg(long, default_value = "1/1000000000")]
        tol: String,
    },
    /// Periodic-orbit search of the difference system inside an interval such as "(-1,1)"
    Orbit {
        #[arg(value_parser = parse::coefficient, allow_hyphen_values = true)]
        a: Coefficient,
        /// Difference alphabet v1,v2,...
        #[arg(allow_hyphen_values = true)]
        v: String,
        #[arg(allow_hyphen_values = true)]
        interval: String,
        #[arg(long, default_value_t = DEFAULT_MAX_PERIOD)]
        max_period: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_FIXPOINT_ITERS)]
        max_iters: usize,
    },
    /// Explicit pair of trajectories with equal outputs for |a| > 2
    Counterexample {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_COUNTEREXAMPLE_LENGTH)]
        length: usize,
    },
    /// Reconstruct inputs from an output sequence y0,y1,...
    Invert {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        outputs: String,
    },
    /// Exceptional denominators q <= qmax for slope tau (prefix ~ for a float)
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        tau: String,
        #[arg(long)]
        qmax: u64,
        /// Keep only hits with 1/p above this threshold
        #[arg(long)]
        theta: Option<String>,
    },
    /// Grid estimate of min_t max_i frac(zeta_i + a^i t)
    Probe {
        #[arg(value_parser = parse::coefficient, allow_hyphen_values = true)]
        a: Coefficient,
        /// Offsets zeta_1,...,zeta_J
        #[arg(long, allow_hyphen_values = true)]
        zeta: String,
        #[arg(long, default_value_t = 10_000)]
        grid: usize,
    },
    /// Exhaustive search for indistinguishable input words
    Bruteforce {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CROSSCHECK_DEPTH)]
        depth: usize,
    },
    /// Exceptional q-list and left-hand-side values for the example family
    ReproExample {
        #[arg(long, allow_hyphen_values = true)]
        tau: String,
        #[arg(long)]
        qmax: u64,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl From<InvError> for CliError {
    fn from(e: InvError) -> Self {
        CliError::Data(e.to_string())
    }
}

struct Output {
    value: Value,
    text: Option<String>,
    code: u8,
}

impl Output {
    fn new(value: impl Serialize) -> Result<Self, CliError> {
        let value = serde_json::to_value(value).map_err(|e| CliError::Internal(e.to_string()))?;
        Ok(Output { value, text: None, code: 0 })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(&cli).and_then(|out| emit(&cli, out)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Analyze { file, crosscheck, depth, max_period, max_iters, length, timings } => {
            let sys = load_system(file)?;
            let opts = ReportOptions {
                analyze: AnalyzeOptions {
                    counterexample_length: *length,
                    max_period: *max_period,
                    max_fixpoint_iters: *max_iters,
                },
                crosscheck_depth: crosscheck.then_some(*depth),
                timings: *timings,
            };
            let report = AnalysisReport::build(&sys, &opts);
            let code = match report.uli.status {
                UliStatus::UliOneStep | UliStatus::NotUli => 0,
                UliStatus::UndecidedGap => EXIT_GAP,
                UliStatus::UnsupportedContractive => EXIT_CONTRACTIVE,
            };
            let text = report.to_text();
            Ok(Output { text: Some(text), code, ..Output::new(&report)? })
        }
        Command::Epsilon { a } => Output::new(epsilon_bounds(a)?),
        Command::Mahler { coeffs, tol } => {
            let p = parse::polynomial(coeffs).map_err(CliError::Usage)?;
            let tol = parse::rational(tol).map_err(CliError::Usage)?;
            let data = |e: quantinv_core::mahler::MahlerError| CliError::Data(e.to_string());
            Output::new(json!({
                "polynomial": p,
                "measure": mahler_measure(&p, &tol).map_err(data)?,
                "measure_half": mahler_half(&p, &tol).map_err(data)?,
                "measure_double": mahler_double(&p, &tol).map_err(data)?,
                "norms": norm_report(&p),
                "coefficient_bounds": verify_coefficient_bounds(&p).map_err(data)?,
            }))
        }
        Command::Orbit { a, v, interval, max_period, max_iters } => {
            let vs = parse::rationals(v).map_err(CliError::Usage)?;
            let target = parse::interval(interval).map_err(CliError::Usage)?;
            Output::new(invariant_orbit_search(a, &vs, &target, *max_period, *max_iters)?)
        }
        Command::Counterexample { file, length } => {
            let norm = load_system(file)?.normalize();
            Output::new(counterexample_expansive(norm.a(), norm.inputs(), *length)?)
        }
        Command::Invert { file, outputs } => {
            let sys = load_system(file)?;
            let ys = parse::rationals(outputs)
                .map_err(CliError::Usage)?
                .into_iter()
                .map(|r| if r.is_integer() { Ok(r.numer().clone()) } else { Err(format!("output {r} is not an integer")) })
                .collect::<Result<Vec<_>, _>>()
                .map_err(CliError::Usage)?;
            let norm = sys.normalize();
            let recovered = invert_sequence(&norm, &ys)?;
            let scale = norm.input_scale();
            let original: Vec<Rational> = recovered.iter().map(|u| u / scale).collect();
            Output::new(json!({ "inputs": original, "normalized_inputs": recovered }))
        }
        Command::Classify { tau, qmax, theta } => {
            let tau = parse::tau(tau).map_err(CliError::Usage)?;
            let theta = theta.as_deref().map(parse::rational).transpose().map_err(CliError::Usage)?;
            Output::new(classify_with_threshold(&tau, *qmax, theta.as_ref())?)
        }
        Command::Probe { a, zeta, grid } => {
            let zeta = parse::floats(zeta).map_err(CliError::Usage)?;
            let probe = kronecker_density_probe(a, zeta.len(), &zeta, *grid).map_err(|e| CliError::Usage(e.to_string()))?;
            let bound = epsilon_bounds(a).ok().map(|e| e.best);
            let mut out = Output::new(&probe)?;
            out.value["estimate"] = json!(format!("{:.12}", probe.estimate));
            out.value["epsilon_best"] = json!(bound);
            Ok(out)
        }
        Command::Bruteforce { file, depth } => {
            let norm = load_system(file)?.normalize();
            let outcome = bruteforce_indistinguishable(&norm, *depth, &BruteforceOptions::default())
                .map_err(|e| CliError::Data(e.to_string()))?;
            Output::new(outcome)
        }
        Command::ReproExample { tau, qmax } => {
            let tau = parse::tau(tau).map_err(CliError::Usage)?;
            let c = classify_with_threshold(&tau, *qmax, None)?;
            Output::new(json!({ "tau": c.tau, "q_max": c.q_max, "q_list": c.qs(), "h_values": c.h_values }))
        }
    }
}

fn load_system(path: &Path) -> Result<QuantizedSystem, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    QuantizedSystem::from_json(&text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn emit(cli: &Cli, out: Output) -> Result<u8, CliError> {
    let body = match cli.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&out.value).map_err(|e| CliError::Internal(e.to_string()))?;
            s.push('\n');
            s
        }
        Format::Text => out.text.unwrap_or_else(|| {
            let mut lines = Vec::new();
            flatten(&out.value, String::new(), &mut lines);
            lines.join("\n") + "\n"
        }),
    };
    match &cli.out {
        Some(path) => fs::write(path, body).map_err(|e| CliError::Internal(format!("{}: {e}", path.display())))?,
        None => std::io::stdout().write_all(body.as_bytes()).map_err(|e| CliError::Internal(e.to_string()))?,
    }
    Ok(out.code)
}

/// `path: value` lines for scalar leaves.
fn flatten(v: &Value, prefix: String, lines: &mut Vec<String>) {
    let join = |key: &str| if prefix.is_empty() { key.to_string() } else { format!("{prefix}.{key}") };
    match v {
        Value::Object(map) => map.iter().for_each(|(k, v)| flatten(v, join(k), lines)),
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            lines.push(format!("{prefix}: [{}]", parts.join(", ")));
        }
        Value::Array(items) => items.iter().enumerate().for_each(|(i, v)| flatten(v, format!("{prefix}[{i}]"), lines)),
        _ => lines.push(format!("{prefix}: {}", scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
