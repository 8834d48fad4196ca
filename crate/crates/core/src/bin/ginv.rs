use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};

use ginv::drazin::{self, DrazinError};
use ginv::generator;
use ginv::io::{self, AnyMatrix, AnyTriple, IoError, JsonScalar};
use ginv::matrix::{Matrix, MatrixError};
use ginv::scalar::{Backend, Gaussian, Tolerance};
use ginv::selftest::{self, SelftestConfig};
use ginv::transfer::{self, Resolvent, TransferError, Triple, CONDITION_TERMS};

#[derive(Parser)]
#[command(
    name = "ginv",
    version,
    about = "Drazin inverses and generalized Jacobson transfers for complex matrices"
)]
struct Cli {
    /// Arithmetic backend; overrides the backend declared in the input.
    #[arg(long, global = true, env = "GINV_BACKEND")]
    backend: Option<Backend>,
    /// Relative rank tolerance for the float backend (ignored when exact).
    #[arg(long, global = true)]
    eps_rel: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// JSON input file, or `-` for stdin.
    file: Option<PathBuf>,
    /// Use the built-in 4x4 example instead of a file.
    #[arg(long, conflicts_with = "file")]
    example: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Drazin inverse, index and spectral idempotent of a matrix.
    /// With --example the matrix is I - AC of the built-in triple.
    Drazin(Input),
    /// Check a(ba)^2 = abaca = acaba = (ac)^2a for a triple.
    Verify(Input),
    /// Run a transfer formula on a triple and compare with the direct inverse.
    Transfer {
        #[command(flatten)]
        input: Input,
        /// gdrazin, drazin, group, cline, zhuang or lambda=VALUE.
        #[arg(long, default_value = "gdrazin")]
        mode: Mode,
        /// Invert the literal factor 1 - α(1 + ba) instead of the projected one.
        #[arg(long)]
        statement_literal: bool,
    },
    /// Run the property suite over generated triples.
    Selftest {
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..=12))]
        dim: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also report singularity of the literal factor 1 - α(1 + ba).
        #[arg(long)]
        statement_literal: bool,
    },
    /// Print the built-in example triple as JSON.
    Example,
}

#[derive(Debug, Clone, PartialEq)]
enum Mode {
    Gdrazin,
    Drazin,
    Group,
    Cline,
    Zhuang,
    Lambda(String),
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gdrazin" => Ok(Mode::Gdrazin),
            "drazin" => Ok(Mode::Drazin),
            "group" => Ok(Mode::Group),
            "cline" => Ok(Mode::Cline),
            "zhuang" => Ok(Mode::Zhuang),
            _ => match s.strip_prefix("lambda=") {
                Some(v) if !v.is_empty() => Ok(Mode::Lambda(v.to_string())),
                _ => Err(format!(
                    "unknown mode `{s}` (gdrazin, drazin, group, cline, zhuang, lambda=VALUE)"
                )),
            },
        }
    }
}

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Exit {
    Pass = 0,
    Finding = 1,
    Input = 2,
    Internal = 3,
    Precondition = 4,
}

#[derive(Debug)]
struct Failure {
    exit: Exit,
    msg: String,
}

impl Failure {
    fn new(exit: Exit, msg: impl fmt::Display) -> Self {
        Failure {
            exit,
            msg: msg.to_string(),
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::new(Exit::Input, e)
    }
}

impl From<MatrixError> for Failure {
    fn from(e: MatrixError) -> Self {
        Failure::new(Exit::Input, e)
    }
}

impl From<DrazinError> for Failure {
    fn from(e: DrazinError) -> Self {
        let exit = match e {
            DrazinError::InternalInconsistency(_) => Exit::Internal,
            DrazinError::Matrix(_) => Exit::Input,
            _ => Exit::Precondition,
        };
        Failure::new(exit, e)
    }
}

impl From<TransferError> for Failure {
    fn from(e: TransferError) -> Self {
        match e {
            TransferError::InternalInconsistency(_) => Failure::new(Exit::Internal, e),
            TransferError::Drazin(inner) => inner.into(),
            TransferError::Matrix(inner) => inner.into(),
            _ => Failure::new(Exit::Precondition, e),
        }
    }
}

/// Scalars a `lambda=VALUE` mode can be parsed into.
trait CliScalar: JsonScalar {
    fn parse_lambda(s: &str) -> Result<Self, String>;
}

impl CliScalar for Gaussian {
    fn parse_lambda(s: &str) -> Result<Self, String> {
        s.parse().map_err(|e| format!("{e}"))
    }
}

impl CliScalar for Complex64 {
    fn parse_lambda(s: &str) -> Result<Self, String> {
        if let Ok(g) = s.parse::<Gaussian>() {
            return Ok(g.to_complex());
        }
        s.parse::<Complex64>()
            .map_err(|e| format!("cannot parse `{s}`: {e}"))
    }
}

struct Context {
    backend: Option<Backend>,
    eps_rel: Option<f64>,
}

impl Context {
    fn tolerance(&self, backend: Backend) -> Result<Tolerance, Failure> {
        match (backend, self.eps_rel) {
            (Backend::Exact, _) => Ok(Tolerance::exact()),
            (Backend::Float, None) => Ok(Tolerance::for_backend(Backend::Float)),
            (Backend::Float, Some(eps)) => {
                Tolerance::new(eps, Backend::Float).map_err(|e| Failure::new(Exit::Input, e))
            }
        }
    }

    fn matrix(&self, input: &Input) -> Result<AnyMatrix, Failure> {
        let m = if input.example {
            let t = generator::example_33();
            AnyMatrix::Exact(&Matrix::identity(4) - &(&t.a * &t.c))
        } else {
            io::parse_matrix(&read_input(input)?)?
        };
        Ok(match self.backend {
            Some(b) => m.into_backend(b)?,
            None => m,
        })
    }

    fn triple(&self, input: &Input) -> Result<AnyTriple, Failure> {
        let t = if input.example {
            AnyTriple::Exact(generator::example_33())
        } else {
            io::parse_triple(&read_input(input)?, self.eps_rel)?
        };
        Ok(match self.backend {
            Some(b) => t.into_backend(b)?,
            None => t,
        })
    }
}

fn read_input(input: &Input) -> Result<String, Failure> {
    let Some(path) = &input.file else {
        return Err(Failure::new(
            Exit::Input,
            "no input file (pass a path, `-` or --example)",
        ));
    };
    let read = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(path)
    };
    read.map_err(|e| Failure::new(Exit::Input, format!("{}: {e}", path.display())))
}

/// Writes a line to stdout; a closed pipe is not an error.
fn say(line: impl fmt::Display) {
    let _ = writeln!(std::io::stdout().lock(), "{line}");
}

fn print_json(v: &Value) {
    say(serde_json::to_string_pretty(v).expect("JSON values serialize"));
}

fn cmd_drazin<T: CliScalar>(m: &Matrix<T>, tol: Tolerance) -> Result<Exit, Failure> {
    let r = drazin::drazin(m, tol)?;
    if !drazin::satisfies_drazin_axioms(m, &r.d_inv, r.index, tol) {
        return Err(Failure::new(
            Exit::Internal,
            "computed inverse fails the Drazin axioms",
        ));
    }
    print_json(&json!({
        "index": r.index,
        "group_invertible": r.group_invertible,
        "drazin": io::matrix_to_json(&r.d_inv),
        "idempotent": io::matrix_to_json(&r.idempotent),
    }));
    Ok(Exit::Pass)
}

fn cmd_verify<T: CliScalar>(t: &Triple<T>, tol: Tolerance) -> Result<Exit, Failure> {
    let report = transfer::extended_condition_report(&t.a, &t.b, &t.c, tol)?;
    let mut products = serde_json::Map::new();
    for (name, p) in CONDITION_TERMS.iter().zip(&report.products) {
        products.insert(name.to_string(), io::matrix_to_json(p));
    }
    let pairs: Vec<Value> = report
        .pairs
        .iter()
        .map(|&(i, j, equal)| {
            json!({ "lhs": CONDITION_TERMS[i], "rhs": CONDITION_TERMS[j], "equal": equal })
        })
        .collect();
    let first = report.first_failure();
    print_json(&json!({
        "products": products,
        "pairs": pairs,
        "holds": report.holds(),
        "first_failure": first,
    }));
    match first {
        None => Ok(Exit::Pass),
        Some(name) => {
            eprintln!("condition fails: {name}");
            Ok(Exit::Finding)
        }
    }
}

fn cmd_transfer<T: CliScalar>(
    t: &Triple<T>,
    mode: &Mode,
    statement_literal: bool,
    tol: Tolerance,
) -> Result<Exit, Failure> {
    if statement_literal && *mode != Mode::Gdrazin {
        return Err(Failure::new(
            Exit::Input,
            "--statement-literal applies to --mode gdrazin only",
        ));
    }
    let result = match mode {
        Mode::Gdrazin if statement_literal => {
            transfer::transfer_gdrazin_with(t, Resolvent::Literal, tol)
        }
        Mode::Gdrazin => transfer::transfer_gdrazin(t, tol),
        Mode::Drazin => transfer::transfer_drazin(t, tol),
        Mode::Group => transfer::transfer_group(t, tol),
        Mode::Cline => transfer::cline_transfer(t, tol),
        Mode::Zhuang => transfer::zhuang_transfer(&t.a, &t.b, tol),
        Mode::Lambda(v) => {
            let lambda = T::parse_lambda(v).map_err(|e| Failure::new(Exit::Input, e))?;
            transfer::transfer_lambda(t, &lambda, tol)
        }
    };
    match result {
        Ok(report) => {
            print_json(&io::report_to_json(&report));
            if report.passed {
                Ok(Exit::Pass)
            } else {
                let names: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
                eprintln!("transfer check failed: {}", names.join(", "));
                Ok(Exit::Finding)
            }
        }
        Err(TransferError::LiteralFactorSingular) => {
            print_json(&json!({
                "kind": "gdrazin",
                "resolvent": "literal",
                "literal_factor_singular": true,
                "note": "1 - α(1 + ba) = (ba)^2 is singular; the projected factor 1 - α^π α (1 + ba) is always invertible",
            }));
            eprintln!("literal factor 1 - α(1 + ba) is singular for this triple");
            Ok(Exit::Finding)
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_selftest(cfg: &SelftestConfig) -> Exit {
    let summary = selftest::run(cfg);
    say(format!(
        "selftest: backend={} trials={} dim<={} seed={} triples={}",
        cfg.backend, cfg.trials, cfg.dim, cfg.seed, summary.triples
    ));
    for t in &summary.tallies {
        let verdict = if t.failed == 0 { "pass" } else { "FAIL" };
        say(format!(
            "  {verdict:4} {:34} passed={} failed={} skipped={}",
            t.name, t.passed, t.failed, t.skipped
        ));
    }
    if let Some((singular, checked)) = summary.literal {
        say(format!(
            "literal factor 1 - α(1 + ba): singular on {singular} of {checked} triples \
             (it equals (ba)^2; the projected factor is used for all results)"
        ));
    }
    if let Some(cx) = &summary.first_counterexample {
        say(format!(
            "first counterexample: trial {} property `{}`: {}",
            cx.trial, cx.property, cx.detail
        ));
        if let Some(triple) = &cx.triple {
            say(serde_json::to_string(triple).expect("JSON values serialize"));
        }
    }
    let failures = summary.failures();
    if failures == 0 {
        say("all properties passed");
        Exit::Pass
    } else {
        say(format!("{failures} property failures"));
        Exit::Finding
    }
}

fn run(cli: Cli) -> Result<Exit, Failure> {
    let ctx = Context {
        backend: cli.backend,
        eps_rel: cli.eps_rel,
    };
    match cli.command {
        Command::Drazin(input) => match ctx.matrix(&input)? {
            AnyMatrix::Exact(m) => cmd_drazin(&m, ctx.tolerance(Backend::Exact)?),
            AnyMatrix::Float(m) => cmd_drazin(&m, ctx.tolerance(Backend::Float)?),
        },
        Command::Verify(input) => match ctx.triple(&input)? {
            AnyTriple::Exact(t) => cmd_verify(&t, ctx.tolerance(Backend::Exact)?),
            AnyTriple::Float(t) => cmd_verify(&t, ctx.tolerance(Backend::Float)?),
        },
        Command::Transfer {
            input,
            mode,
            statement_literal,
        } => match ctx.triple(&input)? {
            AnyTriple::Exact(t) => {
                cmd_transfer(&t, &mode, statement_literal, ctx.tolerance(Backend::Exact)?)
            }
            AnyTriple::Float(t) => {
                cmd_transfer(&t, &mode, statement_literal, ctx.tolerance(Backend::Float)?)
            }
        },
        Command::Selftest {
            trials,
            dim,
            seed,
            statement_literal,
        } => {
            let backend = ctx.backend.unwrap_or(Backend::Exact);
            let cfg = SelftestConfig {
                trials: trials as usize,
                dim: dim as usize,
                seed,
                backend,
                tol: ctx.tolerance(backend)?,
                statement_literal,
            };
            Ok(cmd_selftest(&cfg))
        }
        Command::Example => {
            print_json(&io::triple_to_json(&generator::example_33()));
            Ok(Exit::Pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(Exit::Input as u8),
            };
        }
    };
    match run(cli) {
        Ok(exit) => ExitCode::from(exit as u8),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.exit as u8)
        }
    }
}
