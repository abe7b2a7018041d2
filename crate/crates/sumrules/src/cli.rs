//! Command-line front end. [`run`] does all the work and returns the text
//! and exit code, so it can be driven in-process.
//!
//! Exit codes: 0 success, 2 unparsable input, 3 dimension or shape errors,
//! 4 a sum rule or self-test check failed.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sumrules_core::coset::{FactorOptions, Side};
use sumrules_core::rates::rate_oracle;
use sumrules_core::{
    factor_input_coset_with, factor_output_coset_with, haar_unitary, rate, sum_over_inputs,
    sum_over_outputs, ComplexMatrix, DelaySpec, Error, PhotonConfig, SumReport, SumSpec,
};

use crate::acceptance;
use crate::bench;
use crate::json::{read_matrix, FactorizationJson, RateJson, SumReportJson};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_DIMENSION: i32 = 3;
pub const EXIT_CHECK_FAILED: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "sumrules", version, about = "Coset sum rules for multiphoton interference")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Split a matrix into SU(n-1) rotations and a Hessenberg coset matrix.
    Factorize(FactorizeArgs),
    /// Coincidence rate for one input and one output configuration.
    Rate(RateArgs),
    /// Compare summed rates for a matrix and its coset matrix.
    Sumcheck(SumcheckArgs),
    /// Time Ryser against the Hessenberg determinant; writes CSV.
    Bench(BenchArgs),
    /// Run the acceptance suite.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
pub struct MatrixSource {
    /// Draw a Haar-random n x n unitary.
    #[arg(long, value_name = "N", conflicts_with = "matrix", required_unless_present = "matrix")]
    pub haar: Option<usize>,
    /// Seed for --haar.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Matrix file: {"rows": r, "cols": c, "data": [[re, im], ...]}.
    #[arg(long, value_name = "PATH")]
    pub matrix: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Output,
    Input,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::Output => Side::Output,
            SideArg::Input => Side::Input,
        }
    }
}

#[derive(Debug, Args)]
pub struct FactorizeArgs {
    #[command(flatten)]
    pub source: MatrixSource,
    #[arg(long, value_enum, default_value = "output")]
    pub side: SideArg,
    /// Move the zeros of the first row (column) to the second.
    #[arg(long)]
    pub alternate_zero: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RateMethodArg {
    /// Closed forms where available, the permutation sum otherwise.
    Auto,
    Oracle,
}

#[derive(Debug, Args)]
pub struct RateArgs {
    #[command(flatten)]
    pub source: MatrixSource,
    /// Input modes, comma separated and 1-based, e.g. 1,2.
    #[arg(long, value_parser = parse_modes)]
    pub input: ModeList,
    /// Output modes, e.g. 1,3.
    #[arg(long, value_parser = parse_modes)]
    pub output: ModeList,
    /// Delays, one per input photon in sorted mode order. Defaults to all zero.
    #[arg(long, value_parser = parse_floats, allow_hyphen_values = true)]
    pub tau: Option<FloatList>,
    /// Spectral width.
    #[arg(long, default_value_t = 1.0)]
    pub s: f64,
    #[arg(long, value_enum, default_value = "auto")]
    pub method: RateMethodArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SumMethodArg {
    /// Full-matrix sum against the coset sum, both through Ryser.
    Ryser,
    /// Full-matrix sum against the coset sum through Hessenberg determinants.
    Det,
    /// All three sums, pairwise.
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct SumcheckArgs {
    #[command(flatten)]
    pub source: MatrixSource,
    #[arg(long, value_enum, default_value = "output")]
    pub side: SideArg,
    /// Fixed input (output side).
    #[arg(long, value_parser = parse_modes)]
    pub input: Option<ModeList>,
    /// Fixed output (input side).
    #[arg(long, value_parser = parse_modes)]
    pub output: Option<ModeList>,
    /// Delays. Output side: one per input photon in sorted mode order.
    /// Input side: the varying photons first, the fixed-mode photon last.
    #[arg(long, value_parser = parse_floats, allow_hyphen_values = true)]
    pub tau: Option<FloatList>,
    #[arg(long, default_value_t = 1.0)]
    pub s: f64,
    #[arg(long, value_enum, default_value = "both")]
    pub method: SumMethodArg,
    /// Mode that always holds a photon; defaults to n.
    #[arg(long)]
    pub fixed_mode: Option<usize>,
    /// Number of Haar draws, seeds seed, seed+1, ... (with --haar only).
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    /// Pass when the gap is at most tolerance * max(1, sum).
    #[arg(long, default_value_t = sumrules_core::sumrules::SUM_TOL, value_parser = parse_tolerance)]
    pub tolerance: f64,
    #[arg(long, value_enum, default_value = "json")]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 4)]
    pub n_min: usize,
    #[arg(long, default_value_t = 14)]
    pub n_max: usize,
    /// Matrices timed per size.
    #[arg(long, default_value_t = 10)]
    pub reps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// Run only criteria whose key contains this text (or whose id equals it).
    #[arg(long)]
    pub filter: Option<String>,
    /// Replace every numeric bound with this value.
    #[arg(long, value_parser = parse_tolerance)]
    pub tolerance: Option<f64>,
}

/// Comma-separated 1-based modes, e.g. `2,3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeList(pub Vec<usize>);

/// Comma-separated numbers, e.g. `0,-0.5`.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatList(pub Vec<f64>);

fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<T>().map_err(|_| format!("cannot parse {t:?}")))
        .collect()
}

fn parse_modes(s: &str) -> Result<ModeList, String> {
    let v: Vec<usize> = parse_list(s)?;
    if v.contains(&0) {
        return Err("modes are 1-based".into());
    }
    Ok(ModeList(v))
}

fn parse_floats(s: &str) -> Result<FloatList, String> {
    let v: Vec<f64> = parse_list(s)?;
    if v.iter().any(|x| !x.is_finite()) {
        return Err("values must be finite".into());
    }
    Ok(FloatList(v))
}

fn parse_tolerance(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
        _ => Err(format!("tolerance must be a positive number, got {s:?}")),
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Self {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn parse(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_PARSE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NonFinite { .. }
            | Error::BadPartition(_)
            | Error::BadDelays(_)
            | Error::Unsupported(_)
            | Error::BadSumSpec(_) => EXIT_PARSE,
            _ => EXIT_DIMENSION,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<crate::json::FormatError> for Failure {
    fn from(e: crate::json::FormatError) -> Self {
        Failure::parse(e.to_string())
    }
}

fn load(source: &MatrixSource) -> Result<ComplexMatrix, Failure> {
    match (&source.matrix, source.haar) {
        (Some(path), None) => Ok(read_matrix(path)?),
        (None, Some(n)) => Ok(haar_unitary(n, source.seed)?),
        _ => Err(Failure::parse("give exactly one of --haar and --matrix")),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn config(modes: &[usize], flag: &str) -> Result<PhotonConfig, Failure> {
    if modes.is_empty() {
        return Err(Failure::parse(format!("{flag} needs at least one mode")));
    }
    Ok(PhotonConfig::new(modes.to_vec())?)
}

fn delays(tau: &Option<FloatList>, photons: usize, s: f64) -> Result<DelaySpec, Failure> {
    let taus = tau.as_ref().map_or_else(|| vec![0.0; photons], |t| t.0.clone());
    let d = DelaySpec::new(taus, s)?;
    if d.len() != photons {
        return Err(Failure {
            code: EXIT_DIMENSION,
            message: format!("{} delays given for {photons} photons", d.len()),
        });
    }
    Ok(d)
}

fn factorize(a: &FactorizeArgs) -> Result<Output, Failure> {
    let u = load(&a.source)?;
    let opts = FactorOptions {
        alternate_zero: a.alternate_zero,
    };
    let f = match a.side {
        SideArg::Output => factor_output_coset_with(&u, opts)?,
        SideArg::Input => factor_input_coset_with(&u, opts)?,
    };
    let mut out = Output::ok(to_json(&FactorizationJson::from(&f)));
    if f.nonunitary_warning() {
        out.stderr = format!("warning: input unitarity defect {:.3e}\n", f.input_defect);
    }
    Ok(out)
}

fn rate_cmd(a: &RateArgs) -> Result<Output, Failure> {
    let u = load(&a.source)?;
    let input = config(&a.input.0, "--input")?;
    let output = config(&a.output.0, "--output")?;
    let d = delays(&a.tau, input.photon_number(), a.s)?;
    let result = match a.method {
        RateMethodArg::Auto => rate(&u, &input, &output, &d)?,
        RateMethodArg::Oracle => {
            let v = rate_oracle(&u, &input, &output, &d)?;
            sumrules_core::rates::RateResult {
                value: v.max(0.0),
                raw: v,
                clamped: v < -sumrules_core::rates::NEGATIVE_RATE_TOL,
                method: sumrules_core::RateMethod::Oracle,
                decomposition: Vec::new(),
                notice: None,
            }
        }
    };
    Ok(Output::ok(to_json(&RateJson::new(
        &result,
        input.modes(),
        output.modes(),
        d.taus(),
        d.width(),
    ))))
}

fn checked_gap(r: &SumReport, method: SumMethodArg) -> Result<f64, Failure> {
    let det = |r: &SumReport| {
        r.sum_coset_det
            .ok_or_else(|| Failure::parse("--method det needs equal delays for every photon"))
    };
    Ok(match method {
        SumMethodArg::Ryser => r.discrepancy(),
        SumMethodArg::Det => (det(r)? - r.sum_full).abs(),
        SumMethodArg::Both => r.max_pairwise_discrepancy(),
    })
}

#[derive(Serialize)]
struct SumcheckJson {
    tolerance: f64,
    method: &'static str,
    passed: bool,
    reports: Vec<SumReportJson>,
}

fn sumcheck(a: &SumcheckArgs) -> Result<Output, Failure> {
    if a.trials == 0 {
        return Err(Failure::parse("--trials must be at least 1"));
    }
    if a.trials > 1 && a.source.haar.is_none() {
        return Err(Failure::parse("--trials needs --haar"));
    }
    let side = Side::from(a.side);
    let (pinned, flag) = match side {
        Side::Output => (&a.input, "--input"),
        Side::Input => (&a.output, "--output"),
    };
    let pinned = config(
        pinned
            .as_ref()
            .map(|m| m.0.as_slice())
            .ok_or_else(|| Failure::parse(format!("{} side sums need {flag}", side.as_str())))?,
        flag,
    )?;
    let np = pinned.photon_number();
    let d = delays(&a.tau, np, a.s)?;
    let mut reports = Vec::new();
    let mut all_passed = true;
    for t in 0..a.trials {
        let (u, seed) = match a.source.haar {
            Some(n) => {
                let seed = a.source.seed.wrapping_add(t as u64);
                (haar_unitary(n, seed)?, Some(seed))
            }
            None => (load(&a.source)?, None),
        };
        let n = u.order()?;
        let spec = SumSpec::new(side, a.fixed_mode.unwrap_or(n), np, d.clone());
        let r = match side {
            Side::Output => sum_over_outputs(&u, &pinned, &spec)?,
            Side::Input => sum_over_inputs(&u, &pinned, &spec)?,
        };
        let gap = checked_gap(&r, a.method)?;
        let passed = gap <= a.tolerance * r.sum_full.abs().max(1.0);
        all_passed &= passed;
        reports.push(SumReportJson::new(&r, pinned.modes(), seed, gap, passed));
    }
    let stdout = match a.format {
        FormatArg::Json => to_json(&SumcheckJson {
            tolerance: a.tolerance,
            method: match a.method {
                SumMethodArg::Ryser => "ryser",
                SumMethodArg::Det => "det",
                SumMethodArg::Both => "both",
            },
            passed: all_passed,
            reports,
        }),
        FormatArg::Csv => sum_csv(&reports).map_err(|e| Failure::parse(e.to_string()))?,
    };
    Ok(Output {
        code: if all_passed { EXIT_OK } else { EXIT_CHECK_FAILED },
        stdout,
        stderr: String::new(),
    })
}

/// Same digits as the JSON output.
fn num(x: f64) -> String {
    serde_json::to_string(&x).expect("finite")
}

fn sum_csv(reports: &[SumReportJson]) -> csv::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["seed", "config", "rate_full", "rate_coset", "rate_coset_det", "path"])?;
    for r in reports {
        for t in &r.per_term_table {
            let modes: Vec<String> = t.config.iter().map(|m| m.to_string()).collect();
            w.write_record([
                r.seed.map(|s| s.to_string()).unwrap_or_default(),
                modes.join(" "),
                num(t.rate_full),
                num(t.rate_coset),
                t.rate_coset_det.map(num).unwrap_or_default(),
                t.path.to_string(),
            ])?;
        }
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("ascii"))
}

fn bench_cmd(a: &BenchArgs) -> Result<Output, Failure> {
    let rows = bench::bench(a.n_min..=a.n_max, a.reps, a.seed)?;
    let mut buf = Vec::new();
    bench::write_csv(&rows, &mut buf).map_err(|e| Failure::parse(e.to_string()))?;
    Ok(Output::ok(String::from_utf8(buf).expect("ascii")))
}

fn selftest(a: &SelftestArgs) -> Result<Output, Failure> {
    let lines = acceptance::run_all(a.filter.as_deref(), a.tolerance);
    if lines.is_empty() {
        return Err(Failure::parse(format!(
            "no criterion matches {:?}",
            a.filter.as_deref().unwrap_or("")
        )));
    }
    let failed = lines.iter().filter(|l| !l.outcome.passed).count();
    let mut stdout: String = lines.iter().map(|l| format!("{l}\n")).collect();
    stdout.push_str(&format!("{} passed, {failed} failed\n", lines.len() - failed));
    Ok(Output {
        code: if failed == 0 { EXIT_OK } else { EXIT_CHECK_FAILED },
        stdout,
        stderr: String::new(),
    })
}

pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output {
                    code: EXIT_PARSE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Output::ok(text)
            };
        }
    };
    let result = match &cli.command {
        Command::Factorize(a) => factorize(a),
        Command::Rate(a) => rate_cmd(a),
        Command::Sumcheck(a) => sumcheck(a),
        Command::Bench(a) => bench_cmd(a),
        Command::Selftest(a) => selftest(a),
    };
    result.unwrap_or_else(|f| Output {
        code: f.code,
        stdout: String::new(),
        stderr: format!("error: {}\n", f.message),
    })
}
