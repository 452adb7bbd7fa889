//! Command-line front end: `fullrank`, `realize` and `gen`.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::format::{parse_interval_matrix, parse_witness, write_interval_matrix, write_rational_matrix, write_witness, WitnessFile};
use crate::lab::{check_certificate, plant, InstanceSpec, RankClass};
use crate::number::rational::{format_rational, parse_rational};
use crate::number::{IntervalMatrix, Rational};
use crate::realize::{realize, Branch, Mode};
use crate::rohn::{oracle_verdict, rect_verdict, square_verdict, Verdict, Violation};

/// Largest square size the sign-pair test runs on without `--force`.
pub const SIGN_PAIR_MAX: usize = 8;

#[derive(Parser, Debug)]
#[command(name = "interval-rank", version, about = "Exact rank tools for interval matrices with rational endpoints")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether every matrix in the interval matrix has full rank.
    Fullrank(FullrankArgs),
    /// Build a rational matrix of a given rank inside the interval matrix.
    Realize(RealizeArgs),
    /// Write a planted instance: an interval matrix and its witness.
    Gen(GenArgs),
}

#[derive(Args, Debug)]
pub struct FullrankArgs {
    pub file: PathBuf,
    /// Cross-check against vertex enumeration (square, at most 4x4).
    #[arg(long)]
    pub oracle: bool,
    /// Run the sign-pair test on squares larger than 8x8.
    #[arg(long)]
    pub force: bool,
}

#[derive(Args, Debug)]
pub struct RealizeArgs {
    pub matrix: PathBuf,
    pub witness: PathBuf,
    #[arg(long)]
    pub rank: usize,
    #[arg(long, default_value = "exact")]
    pub mode: Mode,
    /// Where to write the rational matrix.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long)]
    pub p: usize,
    #[arg(long)]
    pub q: usize,
    /// `0`, `1`, `2`, `q-2`, `q-1`, `q`, or an absolute rank.
    #[arg(long)]
    pub rank: String,
    /// Square-free radicand of the witness field.
    #[arg(long)]
    pub d: u64,
    #[arg(long, default_value = "1/10", value_parser = positive_rational)]
    pub radius: Rational,
    #[arg(long, default_value = "0", value_parser = fraction)]
    pub degenerate_fraction: Rational,
    /// Comma-separated branch tags to force, e.g. `rank2-zero-c-row`.
    #[arg(long, value_delimiter = ',')]
    pub targets: Vec<Branch>,
    #[arg(long)]
    pub seed: u64,
    /// Output prefix; writes `PREFIX.alpha` and `PREFIX.witness`.
    #[arg(long)]
    pub out: PathBuf,
}

fn positive_rational(s: &str) -> Result<Rational, String> {
    let r = parse_rational(s).map_err(|e| e.to_string())?;
    if r > Rational::from_integer(0.into()) {
        Ok(r)
    } else {
        Err(format!("{s} is not positive"))
    }
}

fn fraction(s: &str) -> Result<Rational, String> {
    let r = parse_rational(s).map_err(|e| e.to_string())?;
    if r < Rational::from_integer(0.into()) || r > Rational::from_integer(1.into()) {
        return Err(format!("{s} is outside [0, 1]"));
    }
    Ok(r)
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
}

/// Everything a run reports, in a fixed field order.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct RunReport {
    pub command: Vec<String>,
    pub input_digest: String,
    pub outcome: String,
    pub exit_code: i32,
    pub payload: Value,
    pub error: Option<ErrorInfo>,
    pub timing_ms: u64,
}

/// Failure of a command, before it becomes part of a report.
#[derive(Debug)]
enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Io(_) => 2,
            Failure::Lib(e) => match e {
                Error::NoWitness(_) => 1,
                Error::ConstructionFailed(_) | Error::BoxTooTight | Error::DivisorContainsZero(_) => 3,
                _ => 2,
            },
        }
    }

    fn info(&self) -> ErrorInfo {
        match self {
            Failure::Io(m) => ErrorInfo { kind: "io".into(), message: m.clone() },
            Failure::Lib(e) => {
                let kind = format!("{e:?}");
                let kind = kind.split(['(', ' ', '{']).next().unwrap_or("Error").to_string();
                ErrorInfo { kind, message: e.to_string() }
            }
        }
    }
}

fn outcome_name(code: i32) -> &'static str {
    match code {
        0 => "ok",
        1 => "negative",
        2 => "input-error",
        _ => "defect",
    }
}

struct Digest256(Sha256);

impl Digest256 {
    fn new() -> Self {
        Digest256(Sha256::new())
    }

    fn add(&mut self, bytes: &[u8]) {
        self.0.update((bytes.len() as u64).to_le_bytes());
        self.0.update(bytes);
    }

    fn hex(self) -> String {
        hex::encode(self.0.finalize())
    }
}

fn read(path: &Path, digest: &mut Digest256) -> Result<String, Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    digest.add(&bytes);
    String::from_utf8(bytes).map_err(|_| Failure::Io(format!("{}: not valid UTF-8", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Result<(RunReport, i32), clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = Cli::try_parse_from(&args)?;
    let echo: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let start = Instant::now();
    let mut digest = Digest256::new();
    let (payload, result) = match &cli.command {
        Command::Fullrank(a) => split(cmd_fullrank(a, &mut digest)),
        Command::Realize(a) => split(cmd_realize(a, &mut digest)),
        Command::Gen(a) => split(cmd_gen(a, &mut digest)),
    };
    let code = match &result {
        Ok(code) => *code,
        Err(f) => f.code(),
    };
    let report = RunReport {
        command: echo,
        input_digest: digest.hex(),
        outcome: outcome_name(code).into(),
        exit_code: code,
        payload,
        error: result.err().map(|f| f.info()),
        timing_ms: start.elapsed().as_millis() as u64,
    };
    Ok((report, code))
}

type Step = Result<(Value, i32), (Value, Failure)>;

fn split(s: Step) -> (Value, Result<i32, Failure>) {
    match s {
        Ok((v, code)) => (v, Ok(code)),
        Err((v, f)) => (v, Err(f)),
    }
}

fn bare<T>(r: Result<T, impl Into<Failure>>) -> Result<T, (Value, Failure)> {
    r.map_err(|e| (Value::Null, e.into()))
}

fn violation_json(v: &Violation) -> Value {
    match v {
        Violation::SignPair { x, y, det_mid, det_pair } => json!({
            "kind": "sign-pair",
            "x": x.to_string(),
            "y": y.to_string(),
            "det_mid": format_rational(det_mid),
            "det_pair": format_rational(det_pair),
        }),
        Violation::Orthant { signs, x } => json!({
            "kind": "orthant",
            "signs": signs.to_string(),
            "x": x.iter().map(format_rational).collect::<Vec<_>>(),
        }),
        Violation::Vertex { low, high } => json!({
            "kind": "vertex",
            "det_low": format_rational(low),
            "det_high": format_rational(high),
        }),
    }
}

fn verdict_json(v: &Verdict) -> Value {
    json!({ "full_rank": v.full_rank, "violation": v.violation.as_ref().map(violation_json) })
}

fn cmd_fullrank(a: &FullrankArgs, digest: &mut Digest256) -> Step {
    let text = bare(read(&a.file, digest))?;
    let alpha: IntervalMatrix = bare(parse_interval_matrix(&text))?;
    let (p, q) = alpha.shape();
    let square = p == q;
    if square && p > SIGN_PAIR_MAX && !a.force {
        return Err((
            Value::Null,
            Error::TooLarge(format!("sign-pair test on {p}x{p} needs 4^{p} determinants; pass --force")).into(),
        ));
    }
    let (method, verdict) = if square {
        ("sign-pair", bare(square_verdict(&alpha))?)
    } else {
        ("orthant", rect_verdict(&alpha))
    };
    let oracle = a.oracle.then(|| match oracle_verdict(&alpha) {
        Ok(o) => json!({ "full_rank": o.full_rank, "agrees": o.full_rank == verdict.full_rank }),
        Err(e) => json!({ "skipped": e.to_string() }),
    });
    let agrees = oracle.as_ref().and_then(|o| o.get("agrees")).and_then(Value::as_bool).unwrap_or(true);
    let payload = json!({
        "shape": [p, q],
        "method": method,
        "verdict": verdict_json(&verdict),
        "oracle": oracle,
    });
    let code = match (agrees, verdict.full_rank) {
        (false, _) => 3,
        (true, true) => 0,
        (true, false) => 1,
    };
    Ok((payload, code))
}

fn cmd_realize(a: &RealizeArgs, digest: &mut Digest256) -> Step {
    let mtext = bare(read(&a.matrix, digest))?;
    let wtext = bare(read(&a.witness, digest))?;
    let alpha = bare(parse_interval_matrix(&mtext))?;
    let WitnessFile { witness, .. } = bare(parse_witness(&wtext))?;
    let res = match realize(&alpha, &witness, a.rank, a.mode) {
        Ok(res) => res,
        Err(e @ Error::UnsupportedRank { .. }) => {
            let Error::UnsupportedRank { rank, cols, reason } = &e else { unreachable!() };
            let payload = json!({ "rank": rank, "cols": cols, "reason": reason });
            return Err((payload, e.into()));
        }
        Err(e) => return Err((Value::Null, e.into())),
    };
    let cert = check_certificate(&alpha, &res);
    let out = write_rational_matrix(&res.matrix);
    if let Some(path) = &a.out {
        bare(write(path, &out))?;
    }
    let payload = json!({
        "target_rank": res.target_rank,
        "mode": res.mode.to_string(),
        "branches": res.branches.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
        "matrix": out.lines().collect::<Vec<_>>(),
        "certificate": cert,
    });
    Ok((payload, if cert.passed() { 0 } else { 3 }))
}

fn cmd_gen(a: &GenArgs, digest: &mut Digest256) -> Step {
    let class = match a.rank.parse::<RankClass>() {
        Ok(c) => c,
        Err(e) => match a.rank.parse::<usize>() {
            Ok(r) => bare(RankClass::from_rank(r, a.q).ok_or_else(|| Error::UnsatisfiableSpec(format!("rank {r} is not a plantable class for {} columns", a.q))))?,
            Err(_) => return Err((Value::Null, e.into())),
        },
    };
    let spec = InstanceSpec::new(a.p, a.q, class, a.d, a.seed)
        .with_radius(a.radius.clone())
        .with_degenerate_fraction(a.degenerate_fraction.clone())
        .with_targets(a.targets.clone());
    let echo = json!({
        "p": spec.p,
        "q": spec.q,
        "rank_class": spec.rank_class.to_string(),
        "radicand": spec.radicand,
        "enclosure_radius": format_rational(&spec.enclosure_radius),
        "degenerate_fraction": format_rational(&spec.degenerate_fraction),
        "case_targets": spec.case_targets.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
        "seed": spec.seed,
    });
    digest.add(echo.to_string().as_bytes());
    let inst = plant(&spec).map_err(|e| (json!({ "spec": echo.clone() }), Failure::from(e)))?;
    let alpha_path = with_suffix(&a.out, "alpha");
    let witness_path = with_suffix(&a.out, "witness");
    bare(write(&alpha_path, &write_interval_matrix(&inst.alpha)))?;
    bare(write(&witness_path, &write_witness(&WitnessFile { radicand: a.d, witness: inst.witness })))?;
    let payload = json!({
        "spec": echo,
        "rank": inst.rank,
        "files": [alpha_path.display().to_string(), witness_path.display().to_string()],
    });
    Ok((payload, 0))
}

fn with_suffix(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}
