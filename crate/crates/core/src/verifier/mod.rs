//! Relation evaluation against generator bindings with interior projection.
//!
//! A relation `lhs = rhs` is scored by
//! `‖(lhs - rhs)·P‖ / max(1, ‖lhs·P‖)`, where `P` keeps the basis states whose
//! images under every word in the relation stay inside the boson truncation.

pub mod dsl;
pub mod report;

use std::cell::Cell;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::composite::{
    add_profiles, anticommutator, commutator, graded_bracket, max_profiles, qnumber_of_operator,
    raise_profile, GeneratorBinding, SpaceSpec,
};
use crate::error::{Error, Result};
use crate::fock::{Grading, Operator};
use crate::qarith::{format_complex, qbinomial, qnumber_real, QParam};

pub use dsl::{parse_expr, parse_relation, parse_relations, print_relations, Expr, Rational, Relation};
pub use report::{LadderParams, Report, ReportEntry, ReportParams};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Norm {
    #[default]
    Frobenius,
    Spectral,
}

impl Norm {
    pub fn of(self, op: &Operator) -> f64 {
        match self {
            Norm::Frobenius => op.norm_fro(),
            Norm::Spectral => op.norm_spectral(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct EvalOptions {
    pub tol: f64,
    pub norm: Norm,
    /// Uniform margin on every boson mode instead of the derived ones.
    pub margin: Option<usize>,
    /// Adds a `nonzero(SYM)` entry for every generator a suite references.
    pub nondegeneracy: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            tol: 1e-10,
            norm: Norm::Frobenius,
            margin: None,
            nondegeneracy: true,
        }
    }
}

impl EvalOptions {
    pub fn with_tol(tol: f64) -> Self {
        EvalOptions {
            tol,
            ..Default::default()
        }
    }
}

/// Multiplies the value of the `node`-th q-dependent node (pre-order, lhs
/// first) by `factor`.
#[derive(Clone, Copy, Debug)]
pub struct QPerturbation {
    pub node: usize,
    pub factor: Complex64,
}

/// Diagonal 0/1 operator keeping states with every boson occupation below
/// `D - margin`.
pub fn interior_projector(space: &Arc<SpaceSpec>, margin: usize) -> Result<Operator> {
    let mask = space.interior_mask(&space.uniform_margins(margin))?;
    let values: Vec<Complex64> = mask
        .iter()
        .map(|&k| Complex64::new(if k { 1.0 } else { 0.0 }, 0.0))
        .collect();
    Operator::from_diagonal(space, &values)
}

#[derive(Clone, Debug)]
enum Value {
    Scalar(Complex64),
    Op(Operator),
}

impl Value {
    fn into_op(self, space: &Arc<SpaceSpec>) -> Operator {
        match self {
            Value::Scalar(z) => Operator::identity(space).scale(z),
            Value::Op(op) => op,
        }
    }

    fn grading(&self) -> Option<Grading> {
        match self {
            Value::Scalar(_) => Some(Grading::Even),
            Value::Op(op) => op.grading(),
        }
    }
}

struct Evaluator<'a> {
    binding: &'a GeneratorBinding,
    q: Option<&'a QParam>,
    perturbation: Option<QPerturbation>,
    next_q_node: Cell<usize>,
}

impl Evaluator<'_> {
    /// The deformation parameter and the factor applied to this node.
    fn q_for_node(&self) -> Result<(QParam, Complex64)> {
        let idx = self.next_q_node.get();
        self.next_q_node.set(idx + 1);
        let q = *self.q.ok_or_else(|| {
            Error::InvalidArgument("relation depends on Q but no deformation parameter was given".into())
        })?;
        let factor = match self.perturbation {
            Some(p) if p.node == idx => p.factor,
            _ => Complex64::new(1.0, 0.0),
        };
        Ok((q, factor))
    }

    fn space(&self) -> &Arc<SpaceSpec> {
        self.binding.space()
    }

    fn eval(&self, e: &Expr) -> Result<Value> {
        Ok(match e {
            Expr::Symbol(s) => Value::Op(self.binding.get(s)?.clone()),
            Expr::Number(z) => Value::Scalar(*z),
            Expr::Qpow(c) => {
                let (q, f) = self.q_for_node()?;
                Value::Scalar(q.powf(c.value()) * f)
            }
            Expr::Qbin(n, t) => {
                let (q, f) = self.q_for_node()?;
                Value::Scalar(qbinomial(*n, *t, &q)? * f)
            }
            Expr::Qnum(a) => {
                let (q, f) = self.q_for_node()?;
                match self.eval(a)? {
                    Value::Scalar(z) => {
                        if z.im.abs() > 1e-12 * (1.0 + z.re.abs()) {
                            return Err(Error::InvalidArgument(format!(
                                "qnum of non-real scalar {}",
                                format_complex(z)
                            )));
                        }
                        Value::Scalar(qnumber_real(z.re, &q)? * f)
                    }
                    Value::Op(op) => Value::Op(qnumber_of_operator(&op, &q)?.scale(f)),
                }
            }
            Expr::Neg(a) => match self.eval(a)? {
                Value::Scalar(z) => Value::Scalar(-z),
                Value::Op(op) => Value::Op(-&op),
            },
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let sign = if matches!(e, Expr::Add(..)) { 1.0 } else { -1.0 };
                let (x, y) = (self.eval(a)?, self.eval(b)?);
                match (x, y) {
                    (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x + y * sign),
                    (x, y) => {
                        let (x, y) = (x.into_op(self.space()), y.into_op(self.space()));
                        Value::Op(if sign > 0.0 { &x + &y } else { &x - &y })
                    }
                }
            }
            Expr::Mul(a, b) => match (self.eval(a)?, self.eval(b)?) {
                (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x * y),
                (Value::Scalar(z), Value::Op(op)) | (Value::Op(op), Value::Scalar(z)) => {
                    Value::Op(op.scale(z))
                }
                (Value::Op(x), Value::Op(y)) => Value::Op(&x * &y),
            },
            Expr::Pow(a, n) => match self.eval(a)? {
                Value::Scalar(z) => Value::Scalar(z.powu(*n)),
                Value::Op(op) => Value::Op(op.pow(*n)),
            },
            Expr::Comm(a, b) | Expr::Acomm(a, b) | Expr::Gbr(a, b) => {
                let (x, y) = (self.eval(a)?, self.eval(b)?);
                if let Expr::Gbr(..) = e {
                    for (v, src) in [(&x, a), (&y, b)] {
                        if v.grading().is_none() {
                            return Err(Error::GradingMissing(src.to_string()));
                        }
                    }
                }
                match (x, y) {
                    (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(match e {
                        Expr::Acomm(..) => x * y * 2.0,
                        _ => Complex64::new(0.0, 0.0),
                    }),
                    (x, y) => {
                        let (x, y) = (x.into_op(self.space()), y.into_op(self.space()));
                        Value::Op(match e {
                            Expr::Comm(..) => commutator(&x, &y)?,
                            Expr::Acomm(..) => anticommutator(&x, &y)?,
                            _ => graded_bracket(&x, &y)?,
                        })
                    }
                }
            }
        })
    }
}

/// Per-mode occupation margins of an expression: products and brackets add
/// the raising depth of their factors, sums take the larger one.
fn expr_profile(e: &Expr, cache: &BTreeMap<String, Vec<usize>>, zero: &[usize]) -> Vec<usize> {
    match e {
        Expr::Symbol(s) => cache.get(s).cloned().unwrap_or_else(|| zero.to_vec()),
        Expr::Number(_) | Expr::Qpow(_) | Expr::Qbin(..) | Expr::Qnum(_) => zero.to_vec(),
        Expr::Neg(a) => expr_profile(a, cache, zero),
        Expr::Pow(a, n) => expr_profile(a, cache, zero)
            .into_iter()
            .map(|m| m * *n as usize)
            .collect(),
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            max_profiles(&expr_profile(a, cache, zero), &expr_profile(b, cache, zero))
        }
        Expr::Mul(a, b) | Expr::Comm(a, b) | Expr::Acomm(a, b) | Expr::Gbr(a, b) => {
            add_profiles(&expr_profile(a, cache, zero), &expr_profile(b, cache, zero))
        }
    }
}

fn profile_cache<'a>(
    symbols: impl Iterator<Item = &'a String>,
    binding: &GeneratorBinding,
) -> BTreeMap<String, Vec<usize>> {
    symbols
        .filter_map(|s| binding.get(s).ok().map(|op| (s.clone(), raise_profile(op))))
        .collect()
}

/// Derived per-mode margins of a relation on a binding.
pub fn relation_margins(rel: &Relation, binding: &GeneratorBinding) -> Vec<usize> {
    let symbols = rel.symbols();
    let cache = profile_cache(symbols.iter(), binding);
    margins_with_cache(rel, binding, &cache)
}

fn margins_with_cache(
    rel: &Relation,
    binding: &GeneratorBinding,
    cache: &BTreeMap<String, Vec<usize>>,
) -> Vec<usize> {
    let zero = vec![0; binding.space().len()];
    max_profiles(
        &expr_profile(&rel.lhs, cache, &zero),
        &expr_profile(&rel.rhs, cache, &zero),
    )
}

fn failed_entry(name: &str, margin: usize, err: Error) -> ReportEntry {
    ReportEntry {
        relation: name.to_string(),
        residual: f64::INFINITY,
        margin,
        pass: false,
        error: Some(err.to_string()),
    }
}

fn evaluate_with_cache(
    rel: &Relation,
    binding: &GeneratorBinding,
    q: Option<&QParam>,
    opts: &EvalOptions,
    perturbation: Option<QPerturbation>,
    cache: &BTreeMap<String, Vec<usize>>,
) -> ReportEntry {
    let space = binding.space();
    let margins = match rel.margin.or(opts.margin) {
        Some(m) => space.uniform_margins(m),
        None => margins_with_cache(rel, binding, cache),
    };
    let margin = margins.iter().copied().max().unwrap_or(0);
    let run = || -> Result<f64> {
        let mask = space.interior_mask(&margins)?;
        let ev = Evaluator {
            binding,
            q,
            perturbation,
            next_q_node: Cell::new(0),
        };
        let lhs = ev.eval(&rel.lhs)?.into_op(space);
        let rhs = ev.eval(&rel.rhs)?.into_op(space);
        let diff = &lhs - &rhs;
        let num = opts.norm.of(&diff.restrict_columns(&mask));
        let den = opts.norm.of(&lhs.restrict_columns(&mask)).max(1.0);
        Ok(num / den)
    };
    match run() {
        Ok(residual) => ReportEntry {
            relation: rel.name.clone(),
            residual,
            margin,
            pass: residual < opts.tol,
            error: None,
        },
        Err(err) => failed_entry(&rel.name, margin, err),
    }
}

/// Scores one relation. Evaluation errors produce a failed entry.
pub fn evaluate_relation(rel: &Relation, binding: &GeneratorBinding, q: Option<&QParam>, opts: &EvalOptions) -> ReportEntry {
    evaluate_relation_perturbed(rel, binding, q, opts, None)
}

pub fn evaluate_relation_perturbed(
    rel: &Relation,
    binding: &GeneratorBinding,
    q: Option<&QParam>,
    opts: &EvalOptions,
    perturbation: Option<QPerturbation>,
) -> ReportEntry {
    let cache = profile_cache(rel.symbols().iter(), binding);
    evaluate_with_cache(rel, binding, q, opts, perturbation, &cache)
}

fn nondegeneracy_entries(suite: &[Relation], binding: &GeneratorBinding) -> Vec<ReportEntry> {
    let symbols: BTreeSet<String> = suite.iter().flat_map(Relation::symbols).collect();
    symbols
        .into_iter()
        .filter_map(|s| {
            let op = binding.get(&s).ok()?;
            let vanishes = op.is_zero();
            Some(ReportEntry {
                relation: format!("nonzero({s})"),
                residual: if vanishes { 1.0 } else { 0.0 },
                margin: 0,
                pass: !vanishes,
                error: vanishes.then(|| format!("generator {s} is identically zero")),
            })
        })
        .collect()
}

/// Evaluates every relation (in parallel) and assembles a report with
/// entries ordered by relation name.
pub fn run_suite(
    name: &str,
    suite: &[Relation],
    binding: &GeneratorBinding,
    q: Option<&QParam>,
    opts: &EvalOptions,
) -> Report {
    run_suite_perturbed(name, suite, binding, q, opts, None)
}

/// [`run_suite`] with one q-dependent node of one relation re-evaluated at
/// a different parameter. `target` is `(relation index, node index)`.
pub fn run_suite_perturbed(
    name: &str,
    suite: &[Relation],
    binding: &GeneratorBinding,
    q: Option<&QParam>,
    opts: &EvalOptions,
    target: Option<(usize, QPerturbation)>,
) -> Report {
    let symbols: BTreeSet<String> = suite.iter().flat_map(Relation::symbols).collect();
    let cache = profile_cache(symbols.iter(), binding);
    let mut entries: Vec<ReportEntry> = suite
        .par_iter()
        .enumerate()
        .map(|(i, rel)| {
            let p = target.and_then(|(ri, p)| (ri == i).then_some(p));
            evaluate_with_cache(rel, binding, q, opts, p, &cache)
        })
        .collect();
    if opts.nondegeneracy {
        entries.extend(nondegeneracy_entries(suite, binding));
    }
    let params = ReportParams {
        tol: opts.tol,
        ..Default::default()
    };
    Report::new(name, params, entries)
}
