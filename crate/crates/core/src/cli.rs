//! The `bidisc` command line: `solve`, `classify`, `sweep` and `selftest`.
//!
//! Complex numbers are passed as comma-separated reals, so a bidisc point is
//! `re1,im1,re2,im2`. Single queries print one JSON document on stdout;
//! sweeps write CSV. Exit codes: 0 valid certificate, 1 invalid input, 2
//! fallback certificate, 3 no convergence or an invalid certificate.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::mobius::BidiscPoint;
use crate::oracle::{sandwich, Budget, Sandwich};
use crate::regions::{classify, PolePair};
use crate::selftest::{self, SelftestOptions};
use crate::solver::{solve, Certificate, CertificateStatus, Problem, SolverConfig, DEFAULT_SEED};
use crate::{Error, Result};

pub const SOLVE_SCHEMA: &str = "bidisc.solve/1";
pub const CLASSIFY_SCHEMA: &str = "bidisc.classify/1";
pub const USAGE_SCHEMA: &str = "bidisc.usage/1";
pub const SWEEP_HEADER: &str =
    "i,j,p1re,p1im,p2re,p2im,q1re,q1im,q2re,q2im,region,value_log,residual_max,sandwich_width,note";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Valid = 0,
    InvalidInput = 1,
    Fallback = 2,
    Failure = 3,
}

impl ExitCode {
    fn for_error(e: &Error) -> ExitCode {
        match e {
            Error::InvalidPoint(_)
            | Error::NotUnimodular(_)
            | Error::DiagonalPoles
            | Error::PoleAtBase
            | Error::InvalidArgument(_) => ExitCode::InvalidInput,
            _ => ExitCode::Failure,
        }
    }

    fn for_status(s: CertificateStatus) -> ExitCode {
        match s {
            CertificateStatus::Valid => ExitCode::Valid,
            CertificateStatus::Fallback => ExitCode::Fallback,
            CertificateStatus::Invalid => ExitCode::Failure,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "bidisc",
    version,
    about = "Certified two-pole extremal functions on the bidisc"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Certified value for one problem.
    Solve(SolveArgs),
    /// Region of one pole pair.
    Classify(ClassifyArgs),
    /// CSV atlas over a two-axis grid of pole coordinates.
    Sweep(SweepArgs),
    /// Run the invariant suites at reduced sample counts.
    Selftest(SelftestArgs),
}

#[derive(Args, Debug, Clone)]
pub struct PointArgs {
    /// Base point as re1,im1,re2,im2.
    #[arg(long, value_parser = parse_reals::<4>, default_value = "0,0,0,0", allow_hyphen_values = true)]
    pub z: [f64; 4],
    /// First pole as re1,im1,re2,im2.
    #[arg(long, value_parser = parse_reals::<4>, allow_hyphen_values = true)]
    pub p: [f64; 4],
    /// Second pole as re1,im1,re2,im2.
    #[arg(long, value_parser = parse_reals::<4>, allow_hyphen_values = true)]
    pub q: [f64; 4],
}

impl PointArgs {
    fn problem(&self) -> Result<Problem> {
        Problem::new(
            BidiscPoint::from_reals(self.z)?,
            BidiscPoint::from_reals(self.p)?,
            BidiscPoint::from_reals(self.q)?,
        )
    }
}

#[derive(Args, Debug, Clone)]
pub struct SolverArgs {
    #[arg(long, env = "BIDISC_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Classification tolerance.
    #[arg(long, default_value_t = crate::regions::DEFAULT_EPS)]
    pub eps: f64,
    /// Multistart budget per orientation.
    #[arg(long, default_value_t = SolverConfig::default().starts)]
    pub starts: usize,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            seed: self.seed,
            eps: self.eps,
            starts: self.starts,
            ..SolverConfig::default()
        }
    }
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub points: PointArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Attach the brute-force sandwich.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub points: PointArgs,
    #[arg(long, default_value_t = crate::regions::DEFAULT_EPS)]
    pub eps: f64,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Base pole pair; coordinates not on an axis keep these values.
    #[arg(long, value_parser = parse_reals::<4>, allow_hyphen_values = true)]
    pub p: [f64; 4],
    #[arg(long, value_parser = parse_reals::<4>, allow_hyphen_values = true)]
    pub q: [f64; 4],
    /// Coordinate driven by the row index, as NAME=LO:HI with NAME one of
    /// p1re, p1im, p2re, p2im, q1re, q1im, q2re, q2im. Repeatable.
    #[arg(long = "i-axis", value_parser = parse_axis, required = true, allow_hyphen_values = true)]
    pub i_axis: Vec<Axis>,
    /// Coordinate driven by the column index. Repeatable.
    #[arg(long = "j-axis", value_parser = parse_axis, required = true, allow_hyphen_values = true)]
    pub j_axis: Vec<Axis>,
    /// Grid resolution as NI,NJ.
    #[arg(long, value_parser = parse_resolution, default_value = "16,16")]
    pub resolution: [usize; 2],
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Add the sandwich width per cell.
    #[arg(long)]
    pub oracle: bool,
    /// Worker threads (0 = all cores).
    #[arg(long, env = "BIDISC_THREADS", default_value_t = 0)]
    pub threads: usize,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SelftestArgs {
    /// Reduced sample counts.
    #[arg(long)]
    pub quick: bool,
    #[arg(long, env = "BIDISC_SEED")]
    pub seed: Option<u64>,
}

const COORDINATES: [&str; 8] = [
    "p1re", "p1im", "p2re", "p2im", "q1re", "q1im", "q2re", "q2im",
];

/// One real pole coordinate swept linearly from `lo` to `hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub coordinate: usize,
    pub lo: f64,
    pub hi: f64,
}

fn parse_reals<const N: usize>(s: &str) -> std::result::Result<[f64; N], String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    let values: [f64; N] = parts
        .try_into()
        .map_err(|v: Vec<f64>| format!("expected {N} comma-separated reals, got {}", v.len()))?;
    if values.iter().all(|v| v.is_finite()) {
        Ok(values)
    } else {
        Err("values must be finite".into())
    }
}

fn parse_axis(s: &str) -> std::result::Result<Axis, String> {
    let (name, range) = s.split_once('=').ok_or("expected NAME=LO:HI")?;
    let coordinate = COORDINATES
        .iter()
        .position(|c| *c == name.trim())
        .ok_or_else(|| format!("unknown coordinate {name:?}"))?;
    let (lo, hi) = range.split_once(':').ok_or("expected LO:HI")?;
    let [lo, hi] = parse_reals::<2>(&format!("{lo},{hi}"))?;
    Ok(Axis { coordinate, lo, hi })
}

fn parse_resolution(s: &str) -> std::result::Result<[usize; 2], String> {
    let (a, b) = s.split_once(',').ok_or("expected NI,NJ")?;
    let n = |x: &str| x.trim().parse::<usize>().map_err(|e| e.to_string());
    let r = [n(a)?, n(b)?];
    if r.iter().any(|&k| k < 2) {
        return Err("each axis needs at least 2 points".into());
    }
    Ok(r)
}

/// Parses `args` (including the program name), runs the command, and
/// returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                ExitCode::InvalidInput as i32
            } else {
                0
            };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
                let _ = writeln!(
                    out,
                    "{}",
                    error_json(USAGE_SCHEMA, "USAGE", text.lines().next().unwrap_or(""))
                );
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let code = match cli.command {
        Command::Solve(a) => cmd_solve(&a, out),
        Command::Classify(a) => cmd_classify(&a, out),
        Command::Sweep(a) => cmd_sweep(&a, out, err),
        Command::Selftest(a) => cmd_selftest(&a, out),
    };
    code as i32
}

fn error_json(schema: &str, tag: &str, message: &str) -> String {
    json!({ "schema": schema, "error": { "tag": tag, "message": message } }).to_string()
}

fn emit(out: &mut dyn Write, value: &impl Serialize, pretty: bool) {
    let text = if pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    };
    let _ = writeln!(out, "{}", text.expect("JSON serialization of plain data"));
}

#[derive(Serialize)]
struct SolveInputs {
    z: [f64; 4],
    p: [f64; 4],
    q: [f64; 4],
    seed: u64,
    eps: f64,
    starts: usize,
}

#[derive(Serialize)]
struct SolveReport<'a> {
    schema: &'static str,
    inputs: SolveInputs,
    region: &'static str,
    status: CertificateStatus,
    value_log: f64,
    value_modulus: f64,
    certificate: &'a Certificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    sandwich: Option<Sandwich>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sandwich_error: Option<&'static str>,
}

pub fn cmd_solve(args: &SolveArgs, out: &mut dyn Write) -> ExitCode {
    let config = args.solver.config();
    let cert = match args.points.problem().and_then(|p| solve(&p, &config)) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(out, "{}", error_json(SOLVE_SCHEMA, e.tag(), &e.to_string()));
            return ExitCode::for_error(&e);
        }
    };
    let (sandwich, sandwich_error) = if args.oracle {
        match sandwich(&cert.poles, &Budget::default()) {
            Ok(s) => (Some(s), None),
            Err(e) => (None, Some(e.tag())),
        }
    } else {
        (None, None)
    };
    let report = SolveReport {
        schema: SOLVE_SCHEMA,
        inputs: SolveInputs {
            z: args.points.z,
            p: args.points.p,
            q: args.points.q,
            seed: config.seed,
            eps: config.eps,
            starts: config.starts,
        },
        region: cert.region.as_str(),
        status: cert.status,
        value_log: cert.value,
        value_modulus: cert.modulus(),
        certificate: &cert,
        sandwich,
        sandwich_error,
    };
    emit(out, &report, true);
    ExitCode::for_status(cert.status)
}

pub fn cmd_classify(args: &ClassifyArgs, out: &mut dyn Write) -> ExitCode {
    let problem = (|| {
        let z = BidiscPoint::from_reals(args.points.z)?;
        let p = BidiscPoint::from_reals(args.points.p)?;
        let q = BidiscPoint::from_reals(args.points.q)?;
        Ok::<_, Error>(Problem { z, p, q })
    })();
    match problem {
        Ok(problem) => {
            let c = classify(&problem.normalized_pair(), args.eps);
            emit(
                out,
                &json!({ "schema": CLASSIFY_SCHEMA, "region": c.label.as_str(), "margin": c.margin }),
                false,
            );
            ExitCode::Valid
        }
        Err(e) => {
            let _ = writeln!(
                out,
                "{}",
                error_json(CLASSIFY_SCHEMA, e.tag(), &e.to_string())
            );
            ExitCode::InvalidInput
        }
    }
}

/// Pole coordinates of cell `(i, j)`.
pub fn sweep_cell(args: &SweepArgs, i: usize, j: usize) -> [f64; 8] {
    let mut r = [0.0; 8];
    r[..4].copy_from_slice(&args.p);
    r[4..].copy_from_slice(&args.q);
    let [ni, nj] = args.resolution;
    for (axes, k, n) in [(&args.i_axis, i, ni), (&args.j_axis, j, nj)] {
        let s = k as f64 / (n - 1) as f64;
        for a in axes {
            r[a.coordinate] = a.lo + s * (a.hi - a.lo);
        }
    }
    r
}

fn sweep_row(args: &SweepArgs, config: &SolverConfig, i: usize, j: usize) -> String {
    let r = sweep_cell(args, i, j);
    let coords = r.map(number).join(",");
    let (region, value, residual, width, note) = match PolePair::from_reals(r) {
        Err(e) => (
            "OUTSIDE".to_string(),
            f64::NAN,
            f64::NAN,
            f64::NAN,
            e.tag().to_string(),
        ),
        Ok(pair) => {
            let label = classify(&pair, config.eps).label.as_str().to_string();
            let solved = Problem::at_origin(pair.p, pair.q).and_then(|p| solve(&p, config));
            match solved {
                Err(e) => (label, f64::NAN, f64::NAN, f64::NAN, e.tag().to_string()),
                Ok(cert) => {
                    let (width, note) = if args.oracle {
                        match sandwich(&pair, &Budget::default()) {
                            Ok(s) => (s.width, String::new()),
                            Err(e) => (f64::NAN, e.tag().to_string()),
                        }
                    } else {
                        (f64::NAN, String::new())
                    };
                    let note = match cert.status {
                        CertificateStatus::Valid => note,
                        CertificateStatus::Fallback => join_note("FALLBACK", &note),
                        CertificateStatus::Invalid => join_note("INVALID", &note),
                    };
                    (label, cert.value, cert.residuals.max(), width, note)
                }
            }
        }
    };
    let [value, residual, width] = [value, residual, width].map(number);
    format!("{i},{j},{coords},{region},{value},{residual},{width},{note}")
}

/// Shortest round-trip decimal, in exponent form outside `[1e-4, 1e6)`.
fn number(v: f64) -> String {
    if v == 0.0 || !v.is_finite() || (1e-4..1e6).contains(&v.abs()) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

fn join_note(a: &str, b: &str) -> String {
    if b.is_empty() {
        a.to_string()
    } else {
        format!("{a};{b}")
    }
}

pub fn sweep_csv(args: &SweepArgs) -> String {
    let config = args.solver.config();
    let [ni, nj] = args.resolution;
    let rows: Vec<String> = (0..ni * nj)
        .into_par_iter()
        .map(|k| sweep_row(args, &config, k / nj, k % nj))
        .collect();
    let mut csv = String::from(SWEEP_HEADER);
    csv.push('\n');
    for row in rows {
        csv.push_str(&row);
        csv.push('\n');
    }
    csv
}

pub fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> ExitCode {
    let mut fixed = [0.0; 8];
    fixed[..4].copy_from_slice(&args.p);
    fixed[4..].copy_from_slice(&args.q);
    if PolePair::from_reals(fixed).is_err() {
        let _ = writeln!(err, "INVALID_POINT: base poles must lie in the bidisc");
        return ExitCode::InvalidInput;
    }
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads)
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "THREADS: {e}");
            return ExitCode::InvalidInput;
        }
    };
    let csv = pool.install(|| sweep_csv(args));
    let written = match &args.out {
        Some(path) => std::fs::write(path, csv).map_err(|e| format!("{}: {e}", path.display())),
        None => out.write_all(csv.as_bytes()).map_err(|e| e.to_string()),
    };
    match written {
        Ok(()) => ExitCode::Valid,
        Err(e) => {
            let _ = writeln!(err, "IO_ERROR: {e}");
            ExitCode::InvalidInput
        }
    }
}

pub fn cmd_selftest(args: &SelftestArgs, out: &mut dyn Write) -> ExitCode {
    let mut opts = SelftestOptions {
        quick: args.quick,
        ..SelftestOptions::default()
    };
    if let Some(seed) = args.seed {
        opts.seed = seed;
    }
    let reports = selftest::run(&opts);
    for r in &reports {
        let _ = writeln!(out, "{r}");
    }
    if reports.iter().all(|r| r.passed) {
        ExitCode::Valid
    } else {
        ExitCode::Failure
    }
}
