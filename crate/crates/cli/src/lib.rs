//! The `ultraspec` command line: argument definitions, dispatch and the JSON
//! report envelope. [`run`] is the whole program minus process exit, so it
//! can be driven from tests.

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use ultraspec_core::Error;

pub mod commands;
pub mod parse;
pub mod props;

pub const SCHEMA_VERSION: &str = "1.0";

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "ultraspec",
    version,
    about = "Exact p-adic valuations, ultrametric geometry and spectra of diagonal operators",
    propagate_version = true
)]
pub struct Cli {
    /// Output format: the JSON report or a short text summary of it.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// p-adic valuation V_p(x) of a rational (valuation theory, p-adic absolute value).
    Valuation(ValuationArgs),
    /// p-adic absolute value |x|_p, distance |x - y|_p and the isosceles
    /// triangle witness for three points (non-Archimedean absolute values).
    #[command(name = "absval")]
    AbsVal(AbsValArgs),
    /// Canonical p-adic digit expansion of a rational at fixed precision (completion of Q).
    Expand(ExpandArgs),
    /// Relation between two p-adic balls: disjoint or nested (ultrametric balls).
    Balls(BallsArgs),
    /// Valuation of a rational function at a place of Q(x), with ring and ideal membership
    /// (discrete valuations of the rational function field).
    #[command(name = "funcfield")]
    FuncField(FuncFieldArgs),
    /// Max norm, inner products and the Cauchy-Schwarz check in K^t (non-Archimedean vector spaces).
    Vectors(VectorsArgs),
    /// Spectrum, essential spectrum and Fredholm data of a diagonal operator
    /// given by its eigenvalue profile (spectral theory of diagonal operators).
    Spectrum(SpectrumArgs),
    /// Matrix, theta sequence and eigenvalue checks for a truncated finite-rank
    /// perturbation of a diagonal operator (finite-rank perturbations).
    Perturb(PerturbArgs),
    /// Seeded property suites over every module, with pass/fail counts per property.
    Props(PropsArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct ValuationArgs {
    /// Prime p.
    #[arg(long)]
    pub p: u64,
    /// Rational, e.g. 50/7 or -1/4.
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
}

#[derive(Debug, Args, Serialize)]
pub struct AbsValArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    /// Second point: also report |x - y|_p.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<String>,
    /// Third point: also report the triangle x, y, z.
    #[arg(long, allow_hyphen_values = true, requires = "y")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct ExpandArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    /// Number of digits to produce.
    #[arg(long, default_value_t = 8)]
    pub digits: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct BallsArgs {
    #[arg(long)]
    pub p: u64,
    /// First ball as "center,radius,kind", radius a power of p, kind open|closed.
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
    /// Second ball, same format.
    #[arg(long, allow_hyphen_values = true)]
    pub b: String,
    /// Points to test for membership in both balls.
    #[arg(long = "point", allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct FuncFieldArgs {
    /// Monic irreducible polynomial such as "x-1" or "x^2+1", or "inf".
    #[arg(long)]
    pub place: String,
    /// Rational function, e.g. "[-1,1]/[2,1]" or "(x-1)/(x+2)".
    #[arg(long, allow_hyphen_values = true)]
    pub rf: String,
}

#[derive(Debug, Args, Serialize)]
pub struct VectorsArgs {
    #[arg(long)]
    pub p: u64,
    /// Vector as a list, e.g. "[1/2, 3, 0]".
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    #[arg(long, allow_hyphen_values = true)]
    pub y: String,
    /// Nonzero weights for the weighted form; defaults to all ones.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct SpectrumArgs {
    /// Profile JSON file.
    #[arg(long)]
    pub profile: PathBuf,
    /// Values at which to report multiplicity and Fredholm status.
    #[arg(long = "lambda", allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub lambdas: Vec<String>,
    /// Truncation length for the diagonal prefix and kernel/range split.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncate: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct PerturbArgs {
    /// Diagonal entries, e.g. "[1,2,3]".
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: String,
    /// Weights; defaults to all ones.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<String>,
    /// JSON file with the rank-one pairs: [{"u": [...], "v": [...]}, ...].
    #[arg(long)]
    pub pairs: PathBuf,
    /// Candidate eigenvalues to verify by exact elimination.
    #[arg(long = "check-lambda", allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub check_lambda: Vec<String>,
    /// Keep only the first t coordinates.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncate: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct PropsArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Cases per property.
    #[arg(long, default_value_t = 1000)]
    pub cases: u64,
    /// Run only properties whose name contains this text.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub only: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorKind {
    Usage,
    Domain,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            kind: ErrorKind::Usage,
            message: message.into(),
        }
    }

    pub fn domain(message: impl Into<String>) -> Self {
        CliError {
            kind: ErrorKind::Domain,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Usage => EXIT_USAGE,
            ErrorKind::Domain => EXIT_DOMAIN,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// Malformed or inconsistent input is a usage error; everything else means
/// the computation itself could not be carried out.
impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. }
            | Error::NotPrime(_)
            | Error::InvalidPlace(_)
            | Error::InvalidBall(_)
            | Error::LengthMismatch { .. }
            | Error::ZeroWeight(_)
            | Error::IndexOutOfRange { .. }
            | Error::InvalidProfile(_) => CliError::usage(e.to_string()),
            _ => CliError::domain(e.to_string()),
        }
    }
}

/// Result of a subcommand before it is wrapped in the envelope.
pub struct Outcome {
    pub result: Value,
    pub warnings: Vec<String>,
    /// Domain failure discovered after a full report was produced, such as
    /// a failing property.
    pub failed: bool,
}

impl Outcome {
    pub fn ok(result: impl Serialize) -> Result<Self, CliError> {
        Ok(Outcome {
            result: to_value(result),
            warnings: Vec::new(),
            failed: false,
        })
    }
}

pub(crate) fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report types serialize to JSON")
}

/// What the process should print and exit with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Response {
    pub code: i32,
    pub stdout: String,
}

pub fn run<I, T>(args: I) -> Response
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind as K;
            return match e.kind() {
                K::DisplayHelp | K::DisplayVersion | K::DisplayHelpOnMissingArgumentOrSubcommand => {
                    Response {
                        code: if e.kind() == K::DisplayHelpOnMissingArgumentOrSubcommand {
                            EXIT_USAGE
                        } else {
                            EXIT_OK
                        },
                        stdout: e.render().to_string(),
                    }
                }
                _ => error_response(&CliError::usage(clap_message(&e.render().to_string()))),
            };
        }
    };
    let (name, echo) = command_echo(&cli.command);
    match commands::dispatch(&cli.command) {
        Ok(outcome) => {
            let report = json!({
                "schema_version": SCHEMA_VERSION,
                "command": {"name": name, "args": echo},
                "result": outcome.result,
                "warnings": outcome.warnings,
            });
            let stdout = match cli.format {
                Format::Json => render_json(&report),
                Format::Text => render_text(name, &report),
            };
            Response {
                code: if outcome.failed { EXIT_DOMAIN } else { EXIT_OK },
                stdout,
            }
        }
        Err(e) => error_response(&e),
    }
}

// clap's message without the usage block and help hint
fn clap_message(s: &str) -> String {
    s.lines()
        .take_while(|l| !l.starts_with("Usage:"))
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
        .trim_start_matches("error: ")
        .to_string()
}

fn error_response(e: &CliError) -> Response {
    Response {
        code: e.exit_code(),
        stdout: render_json(&json!({
            "schema_version": SCHEMA_VERSION,
            "error": {"kind": e.kind, "message": e.message},
        })),
    }
}

fn command_echo(cmd: &Command) -> (&'static str, Value) {
    match cmd {
        Command::Valuation(a) => ("valuation", to_value(a)),
        Command::AbsVal(a) => ("absval", to_value(a)),
        Command::Expand(a) => ("expand", to_value(a)),
        Command::Balls(a) => ("balls", to_value(a)),
        Command::FuncField(a) => ("funcfield", to_value(a)),
        Command::Vectors(a) => ("vectors", to_value(a)),
        Command::Spectrum(a) => ("spectrum", to_value(a)),
        Command::Perturb(a) => ("perturb", to_value(a)),
        Command::Props(a) => ("props", to_value(a)),
    }
}

fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always render");
    s.push('\n');
    s
}

fn render_text(name: &str, report: &Value) -> String {
    let mut out = format!("ultraspec {name}\n");
    if let Some(result) = report["result"].as_object() {
        for (k, v) in result {
            out.push_str(&format!("  {k}: {}\n", compact(v)));
        }
    }
    for w in report["warnings"].as_array().into_iter().flatten() {
        out.push_str(&format!("  warning: {}\n", w.as_str().unwrap_or_default()));
    }
    out
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
