//! Command-line front end. `run` returns the process exit status:
//! 0 when every relation passes, 1 when some relation fails, 2 on bad
//! input or degenerate parameters.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::{verify_ptilde_decomposition, verify_sln_decomposition, EpsilonLadder, LimitConfig, SignBranch};
use crate::qarith::{format_complex, nilpotency_order, parse_complex, primitive_root, QParam};
use crate::realizations::{setup_suite, SuiteParams, SUITES};
use crate::composite::GeneratorBinding;
use crate::verifier::{parse_relations, run_suite_perturbed, EvalOptions, Norm, QPerturbation, Relation, Report, ReportParams};
use num_complex::Complex64;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "qsaw", version, about = "Verify q-deformed oscillator realizations of quantum algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a built-in relation suite against its realization.
    Verify(VerifyArgs),
    /// Check the algebra decomposition in the limit Q -> q at a root of unity.
    Limit(LimitArgs),
    /// Check relations from a file against a realization.
    CheckRelations(CheckArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum NormArg {
    Fro,
    Spec,
}

impl From<NormArg> for Norm {
    fn from(n: NormArg) -> Self {
        match n {
            NormArg::Fro => Norm::Frobenius,
            NormArg::Spec => Norm::Spectral,
        }
    }
}

#[derive(Args, Debug)]
struct Deformation {
    /// Deformation parameter, e.g. 1.3 or 0.8+0.2i.
    #[arg(long = "Q", allow_hyphen_values = true, conflicts_with = "r")]
    q: Option<String>,
    /// Use the primitive root of unity exp(2 pi i / r).
    #[arg(long)]
    r: Option<u32>,
}

impl Deformation {
    fn param(&self) -> Result<Option<QParam>> {
        match (&self.q, self.r) {
            (Some(text), _) => Ok(Some(QParam::generic(parse_complex(text)?)?)),
            (None, Some(r)) => Ok(Some(primitive_root(i64::from(r))?)),
            (None, None) => Ok(None),
        }
    }
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// Pass threshold on the relative interior residual.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Interior margin applied to every relation instead of the derived one.
    #[arg(long)]
    margin: Option<usize>,
    #[arg(long, value_enum, default_value = "fro")]
    norm: NormArg,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Negative control: replace this generator by zero.
    #[arg(long, value_name = "SYMBOL")]
    zero: Option<String>,
    /// Negative control: scale the NODE-th Q-dependent coefficient of a
    /// relation (counted from 0, left to right) by --perturb-factor.
    #[arg(long, value_name = "RELATION:NODE")]
    perturb: Option<String>,
    #[arg(long, default_value_t = 1.01)]
    perturb_factor: f64,
}

impl EvalArgs {
    fn options(&self) -> EvalOptions {
        EvalOptions {
            tol: self.tol,
            norm: self.norm.into(),
            margin: self.margin,
            ..Default::default()
        }
    }

    fn run(&self, suite: &str, relations: &[Relation], binding: &GeneratorBinding, q: Option<&QParam>) -> Result<Report> {
        let zeroed;
        let binding = match &self.zero {
            Some(sym) => {
                zeroed = binding.with_zeroed(sym)?;
                &zeroed
            }
            None => binding,
        };
        let target = match &self.perturb {
            Some(spec) => Some(perturbation_target(spec, relations, self.perturb_factor)?),
            None => None,
        };
        Ok(run_suite_perturbed(suite, relations, binding, q, &self.options(), target))
    }
}

fn perturbation_target(spec: &str, relations: &[Relation], factor: f64) -> Result<(usize, QPerturbation)> {
    let bad = || Error::InvalidArgument(format!("--perturb expects RELATION:NODE, got {spec:?}"));
    let (name, node) = spec.rsplit_once(':').ok_or_else(bad)?;
    let node: usize = node.parse().map_err(|_| bad())?;
    let idx = relations
        .iter()
        .position(|r| r.name == name)
        .ok_or_else(|| Error::InvalidArgument(format!("no relation named {name}")))?;
    let available = relations[idx].q_nodes();
    if node >= available {
        return Err(Error::InvalidArgument(format!(
            "relation {name} has {available} Q-dependent coefficients, node {node} requested"
        )));
    }
    Ok((
        idx,
        QPerturbation {
            node,
            factor: Complex64::new(factor, 0.0),
        },
    ))
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
    suite: String,
    /// Rank parameter (number of modes for the oscillator suites).
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[command(flatten)]
    deformation: Deformation,
    /// Levels kept per boson mode.
    #[arg(long, default_value_t = 4)]
    trunc: usize,
    #[command(flatten)]
    eval: EvalArgs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Target {
    Sln,
    Ptilde,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BranchArg {
    Plus,
    Minus,
}

#[derive(Args, Debug)]
struct LimitArgs {
    #[arg(long, value_enum)]
    target: Target,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long)]
    r: u32,
    /// Boson truncation as a multiple of the nilpotency order k.
    #[arg(long, default_value_t = 4)]
    trunc_multiple: usize,
    #[arg(long, default_value_t = 1e-2)]
    eps0: f64,
    #[arg(long, default_value_t = 6)]
    steps: usize,
    #[arg(long, default_value_t = 0.5)]
    decay: f64,
    /// Largest accepted spread between the two best extrapolants.
    #[arg(long, default_value_t = 1e-4)]
    max_spread: f64,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, value_enum, default_value = "minus")]
    branch: BranchArg,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// Relation file, one `name: lhs = rhs` per line.
    #[arg(long)]
    relations: PathBuf,
    /// A suite id, or `file:PATH` of a JSON binding spec.
    #[arg(long)]
    binding: String,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[command(flatten)]
    deformation: Deformation,
    #[arg(long, default_value_t = 4)]
    trunc: usize,
    #[command(flatten)]
    eval: EvalArgs,
}

/// Realization named by `--binding file:PATH`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BindingSpec {
    /// A suite id; the binding is the realization that suite runs on.
    pub realization: String,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trunc: Option<usize>,
    #[serde(rename = "Q", default, skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
}

fn emit(report: &Report, path: Option<&Path>) -> Result<()> {
    let json = report.to_json();
    match path {
        Some(p) => fs::write(p, json + "\n")
            .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{json}").map_err(|e| Error::InvalidArgument(format!("cannot write report: {e}")))
        }
    }
}

fn summarize(report: &Report) -> i32 {
    let status = if report.pass { "pass" } else { "FAIL" };
    eprintln!(
        "{}: {status} ({} relations, max residual {:.3e})",
        report.suite,
        report.entries.len(),
        report.max_residual
    );
    for e in report.failures() {
        match &e.error {
            Some(err) => eprintln!("  failed {}: {err}", e.relation),
            None => eprintln!("  failed {}: residual {:.3e}", e.relation, e.residual),
        }
    }
    if report.pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn params_for(n: usize, q: Option<&QParam>, trunc: Option<usize>, tol: f64) -> ReportParams {
    let (q_text, r) = match q.and_then(QParam::root) {
        Some((r, _)) => (None, Some(r)),
        None => (q.map(|q| format_complex(q.value())), None),
    };
    ReportParams {
        n: Some(n),
        q: q_text,
        r,
        trunc,
        tol,
        ladder: None,
    }
}

fn uses_boson_truncation(suite: &str, q: Option<&QParam>) -> bool {
    match suite {
        "qfermion" | "kfermion" => false,
        "uq-sln" | "uq-sln-serre" | "uq-sln-root" => q.and_then(QParam::root).is_none(),
        _ => true,
    }
}

fn verify(args: &VerifyArgs) -> Result<i32> {
    let q = args.deformation.param()?;
    let setup = setup_suite(
        &args.suite,
        SuiteParams {
            n: args.n,
            q,
            trunc: args.trunc,
        },
    )?;
    let mut report = args.eval.run(&args.suite, &setup.relations, &setup.binding, setup.q.as_ref())?;
    let trunc = uses_boson_truncation(&args.suite, q.as_ref()).then_some(args.trunc);
    report.params = params_for(args.n, q.as_ref(), trunc, args.eval.tol);
    emit(&report, args.eval.report.as_deref())?;
    Ok(summarize(&report))
}

fn limit(args: &LimitArgs) -> Result<i32> {
    let k = nilpotency_order(i64::from(args.r))? as usize;
    if k < 2 {
        return Err(Error::Degenerate { r: args.r, k: k as u32 });
    }
    let ladder = EpsilonLadder {
        eps0: args.eps0,
        steps: args.steps,
        decay: args.decay,
        max_spread: args.max_spread,
    }
    .validated()?;
    let cfg = LimitConfig {
        ladder,
        branch: match args.branch {
            BranchArg::Plus => SignBranch::Plus,
            BranchArg::Minus => SignBranch::Minus,
        },
        tol: args.tol,
    };
    let trunc = args.trunc_multiple * k;
    let report = match args.target {
        Target::Sln => verify_sln_decomposition(args.n, args.r, trunc, &cfg)?,
        Target::Ptilde => verify_ptilde_decomposition(args.n, args.r, trunc, &cfg)?,
    };
    emit(&report, args.report.as_deref())?;
    Ok(summarize(&report))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))
}

fn check_relations(args: &CheckArgs) -> Result<i32> {
    let relations = parse_relations(&read(&args.relations)?)?;
    let (suite, params) = match args.binding.strip_prefix("file:") {
        Some(path) => {
            let spec: BindingSpec = serde_json::from_str(&read(Path::new(path))?)
                .map_err(|e| Error::InvalidArgument(format!("bad binding spec {path}: {e}")))?;
            let deformation = Deformation { q: spec.q, r: spec.r };
            let q = deformation.param()?;
            let trunc = spec.trunc.unwrap_or(args.trunc);
            (spec.realization, SuiteParams { n: spec.n, q, trunc })
        }
        None => {
            let q = args.deformation.param()?;
            (args.binding.clone(), SuiteParams { n: args.n, q, trunc: args.trunc })
        }
    };
    let setup = setup_suite(&suite, params)?;
    let name = args
        .relations
        .file_stem()
        .map_or_else(|| "relations".to_string(), |s| s.to_string_lossy().into_owned());
    let mut report = args.eval.run(&name, &relations, &setup.binding, setup.q.as_ref())?;
    let trunc = uses_boson_truncation(&suite, params.q.as_ref()).then_some(params.trunc);
    report.params = params_for(params.n, params.q.as_ref(), trunc, args.eval.tol);
    emit(&report, args.eval.report.as_deref())?;
    Ok(summarize(&report))
}

/// Applies `QSAW_THREADS` (0 or unset: rayon's default).
fn configure_threads() {
    let Ok(v) = std::env::var("QSAW_THREADS") else {
        return;
    };
    match v.trim().parse::<usize>() {
        Ok(0) => {}
        Ok(n) => {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        Err(_) => eprintln!("warning: ignoring QSAW_THREADS={v:?}"),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    configure_threads();
    let outcome = match &cli.command {
        Command::Verify(a) => verify(a),
        Command::Limit(a) => limit(a),
        Command::CheckRelations(a) => check_relations(a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
