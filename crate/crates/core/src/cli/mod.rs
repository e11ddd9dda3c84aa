//! The `passlab` command line: argument parsing, dispatch and reports.
//!
//! Exit codes: 0 positive verdict or success, 1 negative verdict,
//! 2 input error, 3 inconclusive or unsupported.

pub mod io;
pub mod selftest;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::{DMatrix, DVector};
use serde_json::{json, Map, Value};

use crate::behavior::{behavior_is_passive, decompose, Partition};
use crate::certificate::{
    construct_certificate, evaluate_certificate, spectral_factor_poly, spectral_factor_ss,
    Certificate, CertifyOptions, CertifyOutcome, Factor, SpectralFactor,
};
use crate::error::{Error, Result};
use crate::numkernel::Tolerance;
use crate::polymat::PolyMat;
use crate::prpair::{check_pair_with, CheckOptions, PRPairVerdict, Stage, Status};
use crate::statespace::{parse_signals, realize_behavior, realize_statespace, simulate, StateSpace};
use io::{
    complex_json, cvector_json, float_matrix, fpoly_json, fpoly_matrix_json, matrix_json, num,
    pair_json, parse_input, parse_json, poly_matrix, poly_matrix_json, rat_matrix_json, ss_json,
    to_text, Input,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "passlab", version, about = "Passivity decisions and certificates for LTI systems")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Relative half-width of the imaginary-axis band
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol_axis: f64,
    /// Relative PSD floor
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol_psd: f64,
    /// Residual tolerance for numerical re-checks
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol_residual: f64,
    /// Include full witness vectors
    #[arg(long, global = true)]
    pub witness: bool,
    /// Cross-check condition 3 through the decomposition
    #[arg(long, global = true)]
    pub cross_check: bool,
    /// Allow Jordan chains in the stable block
    #[arg(long, global = true)]
    pub jordan: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Ss,
    Pair,
}

#[derive(Args, Debug, Clone)]
pub struct Source {
    /// Input file
    #[arg(value_name = "FILE")]
    pub file: Option<PathBuf>,
    /// Input file
    #[arg(long = "input", visible_alias = "ss", value_name = "FILE", conflicts_with = "file")]
    pub input: Option<PathBuf>,
}

impl Source {
    fn path(&self) -> Result<&Path> {
        self.file
            .as_deref()
            .or(self.input.as_deref())
            .ok_or_else(|| Error::parse("arguments", "no input file"))
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether a pair (or a realized state-space model) is a positive-real pair
    CheckPair(Source),
    /// Split a pair into its controllable and autonomous parts
    Decompose(Source),
    /// Input-output partition of a passive pair
    Partition(Source),
    /// Convert between state-space and pair form
    Realize {
        #[command(flatten)]
        source: Source,
        /// Kind of the input file
        #[arg(long, value_enum)]
        from: Option<Kind>,
    },
    /// Construct a storage-function certificate
    Certify(Source),
    /// Check a certificate against a state-space model
    VerifyCert {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_name = "FILE")]
        cert: PathBuf,
    },
    /// Simulate a state-space model and print a CSV trajectory
    Simulate {
        #[arg(value_name = "FILE")]
        file: Option<PathBuf>,
        #[arg(long = "ss", value_name = "FILE", conflicts_with = "file")]
        ss: Option<PathBuf>,
        /// Input signals separated by ';', e.g. "sin(t); 2*exp(-t)"
        #[arg(long, default_value = "0")]
        input: String,
        /// Initial state as comma-separated numbers
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<String>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t0: f64,
        #[arg(long)]
        t1: f64,
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
    },
    /// Spectral factor of a para-Hermitian matrix or of G + G⋆
    Specfact {
        #[arg(long, value_name = "FILE", conflicts_with = "ss", required_unless_present = "ss")]
        poly: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        ss: Option<PathBuf>,
    },
    /// Randomized self-consistency battery; seed from PASSLAB_SEED
    Selftest {
        #[arg(long, default_value_t = 40)]
        cases: usize,
    },
}

/// Printed report and exit code.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Dimension(_) | Error::ZeroPolynomial | Error::NotHermitian => {
            EXIT_INPUT
        }
        Error::NotPositiveRealPair | Error::NoRealization | Error::VerificationFailed(_) => {
            EXIT_NEGATIVE
        }
        _ => EXIT_INCONCLUSIVE,
    }
}

fn status_code(s: Status) -> i32 {
    match s {
        Status::Pass => EXIT_OK,
        Status::Fail => EXIT_NEGATIVE,
        Status::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn tolerance(g: &Global) -> Tolerance {
    Tolerance {
        axis_band: g.tol_axis,
        psd_rel: g.tol_psd,
        residual_tol: g.tol_residual,
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| Error::parse(name.clone(), e.to_string()))?;
    parse_json(&text, &name)
}

fn load(path: &Path) -> Result<Input> {
    parse_input(&read_json(path)?)
}

fn as_pair(input: Input) -> Result<(PolyMat, PolyMat)> {
    match input {
        Input::Pair { p, q } => Ok((p, q)),
        Input::Ss(ss) => {
            let r = realize_behavior(&ss)?;
            Ok((r.ptil, r.qtil))
        }
    }
}

fn as_ss(input: Input) -> Result<StateSpace> {
    match input {
        Input::Ss(ss) => Ok(ss),
        Input::Pair { p, q } => realize_statespace(&p, &q),
    }
}

pub fn verdict_json(v: &PRPairVerdict, full: bool) -> Value {
    let mut witnesses = Vec::new();
    if let Some(w) = &v.witness1 {
        let mut o = json!({
            "condition": 1,
            "lambda": complex_json(w.lambda),
            "value": num(w.value),
            "stage": match w.stage { Stage::Axis => "axis", Stage::HalfPlane => "half-plane" },
        });
        if full {
            o["z"] = cvector_json(&w.z);
        }
        witnesses.push(o);
    }
    if let Some(w) = &v.witness2 {
        witnesses.push(json!({
            "condition": 2,
            "lambda": complex_json(w.lambda),
            "sigma_min": num(w.sigma_min),
            "explanation": w.explanation,
        }));
    }
    if let Some(w) = &v.witness3 {
        let mut o = json!({
            "condition": 3,
            "lambda": complex_json(w.lambda),
            "residual": num(w.residual),
        });
        if full {
            o["p"] = Value::Array(w.p.iter().map(fpoly_json).collect());
        }
        witnesses.push(o);
    }
    let mut o = json!({
        "cond1": v.cond1.as_str(),
        "cond2": v.cond2.as_str(),
        "cond3": v.cond3.as_str(),
        "overall": v.overall.as_str(),
        "witnesses": witnesses,
        "notes": v.notes,
    });
    if let Some(c) = &v.cross_check {
        o["cross_check"] = json!({
            "applicable": c.applicable,
            "direct": c.direct.map(|s| s.as_str()),
            "agrees": c.agrees,
        });
    }
    o
}

fn partition_json(p: &Partition) -> Value {
    json!({
        "selection": p.selection,
        "T1": rat_matrix_json(&p.t1),
        "T2": rat_matrix_json(&p.t2),
        "S1": rat_matrix_json(&p.s1),
        "S2": rat_matrix_json(&p.s2),
        "Ptil_io": poly_matrix_json(&p.ptil_io),
        "Qtil_io": poly_matrix_json(&p.qtil_io),
        "degree": p.degree,
    })
}

fn certificate_json(c: &Certificate, ss: &StateSpace) -> Value {
    json!({
        "X": matrix_json(&c.x),
        "L": matrix_json(&c.l),
        "W": matrix_json(&c.w),
        "psd_margin": num(c.psd_margin),
        "residuals": {
            "symmetry": num(c.residuals.symmetry),
            "lyapunov": num(c.residuals.lyapunov),
            "coupling": num(c.residuals.coupling),
            "feedthrough": num(c.residuals.feedthrough),
        },
        "Z": {
            "form": "W + L (sI - A)^-1 B",
            "W": matrix_json(&c.w),
            "L": matrix_json(&c.l),
            "A": matrix_json(&ss.af()),
            "B": matrix_json(&ss.bf()),
            "residual": num(c.spectral.residual),
            "analytic": c.spectral.analytic,
            "full_row_rank": c.spectral.full_row_rank,
        },
        "violations": c.violations,
    })
}

fn spectral_json(sf: &SpectralFactor) -> Value {
    let mut o = json!({
        "rank": sf.rank,
        "residual": num(sf.residual),
        "analytic": sf.analytic,
        "full_row_rank": sf.full_row_rank,
    });
    match &sf.factor {
        Factor::Polynomial(k) => {
            o["form"] = json!("polynomial");
            o["K"] = fpoly_matrix_json(k);
        }
        Factor::Rational { w, l, a, b } => {
            o["form"] = json!("W + L (sI - A)^-1 B");
            o["W"] = matrix_json(w);
            o["L"] = matrix_json(l);
            o["A"] = matrix_json(a);
            o["B"] = matrix_json(b);
        }
    }
    o
}

fn parse_x0(s: Option<&str>, d: usize) -> Result<DVector<f64>> {
    let Some(s) = s else {
        return Ok(DVector::zeros(d));
    };
    let vals: Vec<f64> = s
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .enumerate()
        .map(|(i, t)| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::parse(format!("--x0 entry {}", i + 1), format!("{:?} is not a number", t.trim())))
        })
        .collect::<Result<_>>()?;
    if vals.len() != d {
        return Err(Error::Dimension(format!("--x0 has {} entries, need {d}", vals.len())));
    }
    Ok(DVector::from_vec(vals))
}

fn cert_matrices(v: &Value, ss: &StateSpace) -> Result<(DMatrix<f64>, DMatrix<f64>, DMatrix<f64>)> {
    let get = |k: &str| v.get(k).ok_or_else(|| Error::parse(k, "missing field"));
    let (d, n) = (ss.order(), ss.ports());
    let x = float_matrix(get("X")?, "X")?;
    let x = if x.nrows() == 0 { DMatrix::zeros(d, d) } else { x };
    let mut l = float_matrix(get("L")?, "L")?;
    let mut w = float_matrix(get("W")?, "W")?;
    if l.nrows() == 0 {
        l = DMatrix::zeros(w.nrows(), d);
    }
    if w.nrows() == 0 {
        w = DMatrix::zeros(l.nrows(), n);
    }
    Ok((x, l, w))
}

/// Runs one job and returns its report.
fn dispatch(cli: &Cli) -> Result<(i32, Value)> {
    let g = &cli.global;
    let tol = tolerance(g);
    let check = CheckOptions {
        tol,
        cross_check: g.cross_check,
    };
    match &cli.command {
        Command::CheckPair(src) => {
            let (p, q) = as_pair(load(src.path()?)?)?;
            let v = check_pair_with(&p, &q, &check)?;
            Ok((status_code(v.overall), verdict_json(&v, g.witness)))
        }
        Command::Decompose(src) => {
            let (p, q) = as_pair(load(src.path()?)?)?;
            let dec = decompose(&p, &q)?;
            Ok((
                EXIT_OK,
                json!({
                    "F": poly_matrix_json(&dec.f),
                    "Ptil": poly_matrix_json(&dec.ptil),
                    "Qtil": poly_matrix_json(&dec.qtil),
                    "M": poly_matrix_json(&dec.m),
                    "N": poly_matrix_json(&dec.n),
                    "U": poly_matrix_json(&dec.u),
                    "V": poly_matrix_json(&dec.v),
                    "X": poly_matrix_json(&dec.x),
                    "Y": poly_matrix_json(&dec.y),
                    "verified": dec.verify(&p, &q),
                }),
            ))
        }
        Command::Partition(src) => {
            let (p, q) = as_pair(load(src.path()?)?)?;
            let (v, part) = behavior_is_passive(&p, &q, &check)?;
            let body = json!({
                "verdict": verdict_json(&v, g.witness),
                "partition": part.as_ref().map(partition_json),
                "verified": part.as_ref().map(|x| x.verify(&p, &q)),
            });
            Ok((status_code(v.overall), body))
        }
        Command::Realize { source, from } => {
            let input = load(source.path()?)?;
            match (from, input) {
                (Some(Kind::Pair), Input::Ss(_)) | (Some(Kind::Ss), Input::Pair { .. }) => {
                    Err(Error::parse("kind", "input kind does not match --from"))
                }
                (_, Input::Ss(ss)) => {
                    let r = realize_behavior(&ss)?;
                    let mut o = pair_json(&r.ptil, &r.qtil);
                    o.insert("M".into(), poly_matrix_json(&r.mtil));
                    o.insert("N".into(), poly_matrix_json(&r.ntil));
                    Ok((EXIT_OK, Value::Object(o)))
                }
                (_, Input::Pair { p, q }) => {
                    let ss = realize_statespace(&p, &q)?;
                    Ok((EXIT_OK, Value::Object(ss_json(&ss))))
                }
            }
        }
        Command::Certify(src) => {
            let ss = as_ss(load(src.path()?)?)?;
            let opts = CertifyOptions {
                tol,
                jordan: g.jordan,
            };
            match construct_certificate(&ss, &opts)? {
                CertifyOutcome::Certified(c) => {
                    let mut o = certificate_json(&c.certificate, &ss);
                    o["verdict"] = json!("certified");
                    o["route"] = json!(c.route.as_str());
                    o["blocks"] = json!({
                        "stable": c.blocks.0,
                        "lossless": c.blocks.1,
                        "unobservable": c.blocks.2,
                    });
                    Ok((EXIT_OK, o))
                }
                CertifyOutcome::NotPassive(v) => Ok((
                    EXIT_NEGATIVE,
                    json!({"verdict": "not-passive", "pair": verdict_json(&v, g.witness)}),
                )),
            }
        }
        Command::VerifyCert { source, cert } => {
            let ss = as_ss(load(source.path()?)?)?;
            let (x, l, w) = cert_matrices(&read_json(cert)?, &ss)?;
            let c = evaluate_certificate(&ss, &x, &l, &w, &tol)?;
            let mut o = certificate_json(&c, &ss);
            o["valid"] = json!(c.is_valid());
            Ok((if c.is_valid() { EXIT_OK } else { EXIT_NEGATIVE }, o))
        }
        Command::Simulate { .. } => unreachable!("simulate prints CSV"),
        Command::Specfact { poly, ss } => {
            if let Some(path) = poly {
                let v = read_json(path)?;
                let h = match v.get("H") {
                    Some(h) => poly_matrix(h, "H")?,
                    None => poly_matrix(&v, "H")?,
                };
                let sf = spectral_factor_poly(&h, &tol)?;
                Ok((EXIT_OK, spectral_json(&sf)))
            } else {
                let path = ss.as_ref().ok_or_else(|| Error::parse("arguments", "no input file"))?;
                let sys = as_ss(load(path)?)?;
                let (sf, are) = spectral_factor_ss(&sys, &tol)?;
                let mut o = spectral_json(&sf);
                o["X"] = matrix_json(&are.x);
                o["are_residual"] = num(are.residual);
                Ok((EXIT_OK, o))
            }
        }
        Command::Selftest { cases } => {
            let seed = std::env::var("PASSLAB_SEED")
                .ok()
                .and_then(|s| s.trim().parse::<u64>().ok())
                .unwrap_or(0);
            let r = selftest::run(seed, *cases);
            let code = if r.failures.is_empty() { EXIT_OK } else { EXIT_NEGATIVE };
            Ok((code, r.to_json()))
        }
    }
}

fn error_json(e: &Error) -> Value {
    let mut o = Map::new();
    o.insert("error".into(), json!(e.to_string()));
    if let Error::Parse { location, .. } = e {
        o.insert("location".into(), json!(location));
    }
    o.insert("exit".into(), json!(exit_code(e)));
    Value::Object(o)
}

fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(v).unwrap_or_default();
            s.push('\n');
            s
        }
        Format::Text => to_text(v),
    }
}

fn simulate_job(cli: &Cli) -> Result<String> {
    let Command::Simulate { file, ss, input, x0, t0, t1, h } = &cli.command else {
        unreachable!("called for simulate only")
    };
    let path = file
        .as_deref()
        .or(ss.as_deref())
        .ok_or_else(|| Error::parse("arguments", "no input file"))?;
    let sys = as_ss(load(path)?)?;
    let u = parse_signals(input, sys.ports())?;
    let x0 = parse_x0(x0.as_deref(), sys.order())?;
    Ok(simulate(&sys, &x0, &u, *t0, *t1, *h)?.to_csv())
}

/// Executes a parsed command line.
pub fn execute(cli: &Cli) -> Report {
    let result = if matches!(cli.command, Command::Simulate { .. }) {
        simulate_job(cli).map(|csv| (EXIT_OK, csv))
    } else {
        dispatch(cli).map(|(code, v)| (code, render(&v, cli.global.format)))
    };
    match result {
        Ok((code, stdout)) => Report {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Report {
            code: exit_code(&e),
            stdout: render(&error_json(&e), cli.global.format),
            stderr: format!("passlab: {e}\n"),
        },
    }
}

/// Parses `args` (program name first) and executes.
pub fn run_args<I, T>(args: I) -> Report
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                Report { code, stdout: text, stderr: String::new() }
            } else {
                Report { code, stdout: String::new(), stderr: text }
            }
        }
    }
}

/// Entry point for the binary.
pub fn run() -> i32 {
    let r = run_args(std::env::args_os());
    print!("{}", r.stdout);
    eprint!("{}", r.stderr);
    r.code
}
