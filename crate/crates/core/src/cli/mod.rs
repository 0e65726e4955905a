//! Command-line front end. Every command prints a JSON report (CSV for
//! point dumps) and the exit code encodes the outcome: 0 all checks pass,
//! 1 a check failed, 2 usage or parameter error, 3 resource budget exceeded.

mod config;
mod suites;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

pub use config::RunConfig;
pub use suites::{twisted_field_degree, verify_all};

use crate::{Check, Error};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "lubin-tate",
    version,
    about = "Lubin-Tate formal modules, depth-zero charts, Deligne-Lusztig varieties and GL_n(F_q) characters"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct CommonArgs {
    /// Residue field size q (a prime power).
    #[arg(long, global = true)]
    pub q: Option<u64>,
    /// Height n.
    #[arg(long, global = true)]
    pub n: Option<u32>,
    /// p-adic precision N.
    #[arg(long = "N", global = true)]
    pub prec_n: Option<u32>,
    /// Series degree bound D (default q^n + q).
    #[arg(long = "D", global = true)]
    pub prec_d: Option<u32>,
    /// key=value file supplying defaults for any flag.
    #[arg(long, global = true)]
    pub config: Option<std::path::PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<std::path::PathBuf>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Largest number of vectors an enumeration may scan.
    #[arg(long, global = true)]
    pub budget: Option<u128>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a formal module and verify its axioms.
    FormalGroup {
        #[arg(long, value_enum)]
        kind: Option<ModuleChoice>,
    },
    /// Local equations of the depth-zero model.
    Depth0 {
        #[command(subcommand)]
        action: Depth0Action,
        #[command(flatten)]
        opts: Depth0Opts,
    },
    /// The Deligne-Lusztig variety.
    Dl {
        #[command(subcommand)]
        action: DlAction,
        #[command(flatten)]
        opts: DlOpts,
    },
    /// Character theory of GL_n(F_q).
    Chars {
        #[command(subcommand)]
        action: CharsAction,
    },
    /// Run every suite for (q, n).
    VerifyAll {
        #[command(flatten)]
        opts: Depth0Opts,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModuleChoice {
    Base,
    Universal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LiftChoice {
    Zero,
    Symbolic,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Depth0Action {
    /// The series P_a and their product P.
    Equation,
    /// Blow-up chart, iterated chart and the exceptional equation.
    Chart,
    /// Components of the special fiber and stratum membership.
    Strata,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Depth0Opts {
    /// Lift of the deformation parameters.
    #[arg(long, value_enum, global = true)]
    pub lift: Option<LiftChoice>,
    /// Depth sequence for the iterated chart, e.g. 3,2.
    #[arg(long, value_delimiter = ',', global = true)]
    pub sequence: Option<Vec<u32>>,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum DlAction {
    Equation,
    /// Points over F_{q^m}; with --format csv, dump them.
    Count,
    /// Fibers over the hyperplane complement.
    Fibers,
    /// Points fixed by Frob^frobenius composed with (g, zeta).
    Twisted,
}

#[derive(Args, Debug, Clone, Default)]
pub struct DlOpts {
    /// Extension degree m of the point field.
    #[arg(long, global = true)]
    pub m: Option<u32>,
    /// Ambient extension degree M for twisted counts.
    #[arg(long = "big-m", global = true)]
    pub big_m: Option<u32>,
    /// Frobenius exponent of the twist (default 1).
    #[arg(long, global = true)]
    pub frobenius: Option<u32>,
    /// Index j of zeta_j in mu_{q^n-1}.
    #[arg(long, global = true)]
    pub zeta: Option<u64>,
    /// Matrix g as rows separated by ';', entries by ',' (field codes).
    #[arg(long, global = true)]
    pub g: Option<String>,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharsAction {
    Table,
    Steinberg,
    Correspondence,
}

/// A finished report.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub config: RunConfig,
    pub results: Value,
    pub checks: Vec<ReportCheck>,
    /// Exit code forced by a suite that ran out of resources.
    #[serde(skip)]
    pub exit_override: Option<i32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportCheck {
    pub name: String,
    pub status: &'static str,
    pub details: String,
}

impl From<&Check> for ReportCheck {
    fn from(c: &Check) -> Self {
        ReportCheck {
            name: c.name.clone(),
            status: if c.passed { "pass" } else { "fail" },
            details: c.details.clone(),
        }
    }
}

impl Report {
    pub fn new(command: &str, config: &RunConfig, results: Value, checks: &[Check]) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            config: config.clone(),
            results,
            checks: checks.iter().map(ReportCheck::from).collect(),
            exit_override: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == "pass")
    }

    pub fn exit_code(&self) -> i32 {
        match self.exit_override {
            Some(c) => c,
            None if self.passed() => EXIT_PASS,
            None => EXIT_CHECK_FAILED,
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }
}

/// Exit code for a library error.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Budget { .. } | Error::PrecisionExhausted(_) => EXIT_BUDGET,
        Error::Verification(_) | Error::ValuationMismatch { .. } => EXIT_CHECK_FAILED,
        _ => EXIT_USAGE,
    }
}

/// Output of a command: a report, or raw CSV text.
pub enum Output {
    Report(Report),
    Csv(String),
}

/// Parses `argv` (including the program name), runs the command and writes
/// the result. Returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            let _ = e.print();
            return code;
        }
    };
    let start = Instant::now();
    let outcome = execute(&cli);
    let code = match outcome {
        Ok((out, cfg)) => {
            let (text, code) = match out {
                Output::Report(r) => {
                    let code = r.exit_code();
                    (r.to_json_string(), code)
                }
                Output::Csv(s) => (s, EXIT_PASS),
            };
            match write_output(cfg.output.as_deref(), &text) {
                Ok(()) => code,
                Err(e) => {
                    eprintln!("error: cannot write output: {e}");
                    EXIT_USAGE
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    };
    eprintln!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
    code
}

fn write_output(path: Option<&std::path::Path>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

/// Resolves the configuration and runs the command without writing anything.
pub fn execute(cli: &Cli) -> crate::Result<(Output, RunConfig)> {
    let file: BTreeMap<String, String> = match &cli.common.config {
        Some(p) => config::read_config_file(p)?,
        None => BTreeMap::new(),
    };
    let cfg = RunConfig::resolve(cli, &file)?;
    if let Some(t) = cfg.threads {
        // the global pool can only be set once per process; later calls keep the first
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    let out = suites::dispatch(cli, &cfg)?;
    Ok((out, cfg))
}

pub(crate) fn ok_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or_else(|e| json!({ "serialization_error": e.to_string() }))
}
