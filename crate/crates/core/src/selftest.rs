//! Property suite run by `ginv selftest`: every invariant of the engine and
//! the transfer formulas, checked over the generator corpus.

use rayon::prelude::*;
use serde_json::Value;

use crate::drazin::{self, DrazinError};
use crate::generator::{self, GenError};
use crate::io::{triple_to_json, JsonScalar};
use crate::matrix::Matrix;
use crate::scalar::{Backend, Gaussian, Scalar, Tolerance};
use crate::transfer::{self, Resolvent, TransferError, Triple};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelftestConfig {
    pub trials: usize,
    pub dim: usize,
    pub seed: u64,
    pub backend: Backend,
    pub tol: Tolerance,
    pub statement_literal: bool,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            trials: 10,
            dim: 4,
            seed: 0,
            backend: Backend::Exact,
            tol: Tolerance::exact(),
            statement_literal: false,
        }
    }
}

pub const PROPERTIES: [&str; 15] = [
    "condition",
    "gdrazin",
    "gdrazin completion",
    "drazin",
    "group",
    "cline",
    "lambda=0",
    "lambda=2",
    "lambda=1 matches gdrazin",
    "zhuang valid iff 1-ab invertible",
    "classic jacobson",
    "drazin axioms",
    "group invertible iff index<=1",
    "lemma21 recovers drazin",
    "generation",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyTally {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

/// The first failure seen, in trial order.
#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub trial: usize,
    pub property: &'static str,
    pub detail: String,
    pub triple: Option<Value>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelftestSummary {
    pub triples: usize,
    pub tallies: Vec<PropertyTally>,
    pub first_counterexample: Option<Counterexample>,
    /// `(singular, checked)` counts for the literal factor `1 - α(1 + ba)`.
    pub literal: Option<(usize, usize)>,
}

impl SelftestSummary {
    pub fn all_passed(&self) -> bool {
        self.tallies.iter().all(|t| t.failed == 0)
    }

    pub fn failures(&self) -> usize {
        self.tallies.iter().map(|t| t.failed).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Outcome {
    Pass,
    Skip,
    Fail(String),
}

struct TrialResult {
    trial: usize,
    outcomes: Vec<(&'static str, Outcome)>,
    literal_singular: Option<bool>,
    triple: Option<Value>,
}

/// Trial inputs: the fixture first, then the engineered corpus, then a few
/// random searches at small dimension.
fn corpus(cfg: &SelftestConfig) -> Vec<Result<Triple<Gaussian>, GenError>> {
    let mut out = Vec::new();
    if cfg.dim >= 4 {
        out.push(Ok(generator::example_33()));
    }
    out.extend(generator::standard_corpus(cfg.trials, cfg.dim, cfg.seed));
    let search_dim = cfg.dim.min(2);
    for i in 0..cfg.trials.min(4) {
        let seed = cfg.seed.wrapping_add(i as u64 + 1);
        out.push(generator::gen_random_search(search_dim, seed, 1, 2_000).map(|(t, _)| t));
    }
    out
}

pub fn run(cfg: &SelftestConfig) -> SelftestSummary {
    let inputs: Vec<(usize, Result<Triple<Gaussian>, GenError>)> =
        corpus(cfg).into_iter().enumerate().collect();
    let mut results: Vec<TrialResult> = inputs
        .into_par_iter()
        .map(|(trial, generated)| run_trial(cfg, trial, generated))
        .collect();
    results.sort_by_key(|r| r.trial);

    let mut tallies: Vec<PropertyTally> = PROPERTIES
        .iter()
        .map(|&name| PropertyTally {
            name,
            passed: 0,
            failed: 0,
            skipped: 0,
        })
        .collect();
    let mut first = None;
    let mut literal = cfg.statement_literal.then_some((0, 0));
    for r in &results {
        for (name, outcome) in &r.outcomes {
            let tally = tallies
                .iter_mut()
                .find(|t| t.name == *name)
                .expect("property is registered");
            match outcome {
                Outcome::Pass => tally.passed += 1,
                Outcome::Skip => tally.skipped += 1,
                Outcome::Fail(detail) => {
                    tally.failed += 1;
                    first.get_or_insert_with(|| Counterexample {
                        trial: r.trial,
                        property: name,
                        detail: detail.clone(),
                        triple: r.triple.clone(),
                    });
                }
            }
        }
        if let (Some((singular, checked)), Some(s)) = (literal.as_mut(), r.literal_singular) {
            *checked += 1;
            *singular += usize::from(s);
        }
    }
    SelftestSummary {
        triples: results.iter().filter(|r| r.triple.is_some()).count(),
        tallies,
        first_counterexample: first,
        literal,
    }
}

fn run_trial(
    cfg: &SelftestConfig,
    trial: usize,
    generated: Result<Triple<Gaussian>, GenError>,
) -> TrialResult {
    let triple = match generated {
        Ok(t) => t,
        // Random search coming up empty is not a property failure.
        Err(GenError::NotFound { .. }) => {
            return TrialResult {
                trial,
                outcomes: vec![("generation", Outcome::Skip)],
                literal_singular: None,
                triple: None,
            }
        }
        Err(e) => {
            return TrialResult {
                trial,
                outcomes: vec![("generation", Outcome::Fail(e.to_string()))],
                literal_singular: None,
                triple: None,
            }
        }
    };
    let (mut outcomes, literal_singular, json) = match cfg.backend {
        Backend::Exact => check_triple(&triple, cfg),
        Backend::Float => check_triple(&triple.map(Matrix::to_float), cfg),
    };
    outcomes.insert(0, ("generation", Outcome::Pass));
    TrialResult {
        trial,
        outcomes,
        literal_singular,
        triple: Some(json),
    }
}

fn report_outcome<T: Scalar>(r: Result<transfer::TransferReport<T>, TransferError>) -> Outcome {
    match r {
        Ok(rep) if rep.passed => Outcome::Pass,
        Ok(rep) => Outcome::Fail(
            rep.failures()
                .map(|c| format!("{} (residual {})", c.name, c.residual))
                .collect::<Vec<_>>()
                .join(", "),
        ),
        Err(e) => Outcome::Fail(e.to_string()),
    }
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Outcome::Pass
    } else {
        Outcome::Fail(msg())
    }
}

type TripleOutcome = (Vec<(&'static str, Outcome)>, Option<bool>, Value);

fn check_triple<T: JsonScalar>(t: &Triple<T>, cfg: &SelftestConfig) -> TripleOutcome {
    let tol = cfg.tol;
    let n = t.n();
    let id = Matrix::identity(n);
    let ba = &t.b * &t.a;
    let ac = &t.a * &t.c;
    let alpha = &id - &ba;
    let beta = &id - &ac;
    let mut out: Vec<(&'static str, Outcome)> = Vec::new();

    out.push((
        "condition",
        check(t.condition_ok, || "condition does not hold".into()),
    ));
    let gdrazin = transfer::transfer_gdrazin(t, tol);
    let completion = match &gdrazin {
        Ok(r) => check(
            r.identity(transfer::COMPLETION_CHECK)
                .is_some_and(|c| c.pass),
            || "lemma21 completion of y differs from drazin(1-ac)".into(),
        ),
        Err(e) => Outcome::Fail(e.to_string()),
    };
    out.push(("gdrazin", report_outcome(gdrazin)));
    out.push(("gdrazin completion", completion));
    out.push(("drazin", report_outcome(transfer::transfer_drazin(t, tol))));

    let index_alpha = drazin::index(&alpha, tol);
    let group = match transfer::transfer_group(t, tol) {
        Err(TransferError::NotGroupInvertible {
            which: "1 - ba", ..
        }) if index_alpha > 1 => Outcome::Skip,
        other => report_outcome(other),
    };
    out.push(("group", group));
    out.push(("cline", report_outcome(transfer::cline_transfer(t, tol))));
    out.push((
        "lambda=0",
        report_outcome(transfer::transfer_lambda(t, &T::zero(), tol)),
    ));
    out.push((
        "lambda=2",
        report_outcome(transfer::transfer_lambda(t, &T::from_i64(2), tol)),
    ));
    let lambda_one = match (
        transfer::transfer_lambda(t, &T::one(), tol),
        transfer::transfer_gdrazin(t, tol),
    ) {
        (Ok(l), Ok(g)) => check(l.formula_output.approx_eq(&g.formula_output, tol), || {
            "lambda=1 output differs from gdrazin".into()
        }),
        (Err(e), _) | (_, Err(e)) => Outcome::Fail(e.to_string()),
    };
    out.push(("lambda=1 matches gdrazin", lambda_one));

    let ab = &t.a * &t.b;
    let ab_invertible = (&id - &ab).inverse(tol).is_ok();
    let zhuang = match transfer::zhuang_transfer(&t.a, &t.b, tol) {
        Ok(rep) => check(rep.passed == ab_invertible, || {
            format!(
                "zhuang passed={} but 1-ab invertible={}",
                rep.passed, ab_invertible
            )
        }),
        Err(e) => Outcome::Fail(e.to_string()),
    };
    out.push(("zhuang valid iff 1-ab invertible", zhuang));
    let classic = match transfer::classic_jacobson(&t.a, &t.b, tol) {
        Err(TransferError::JacobsonSingular { ba_singular }) => {
            check(!ab_invertible && ba_singular, || {
                "1-ab and 1-ba disagree on invertibility".into()
            })
        }
        other => report_outcome(other),
    };
    out.push(("classic jacobson", classic));

    for m in [&t.a, &t.b, &t.c, &ba, &ac, &alpha, &beta] {
        out.extend(engine_checks(m, tol));
    }

    let literal_singular = cfg.statement_literal.then(|| literal_outcome(t, tol));
    (out, literal_singular, triple_to_json(t))
}

/// Singularity of the literal factor; the literal resolvent must then
/// report it as an error rather than produce a matrix.
fn literal_outcome<T: Scalar>(t: &Triple<T>, tol: Tolerance) -> bool {
    let singular = transfer::literal_factor_is_singular(t, tol);
    let attempt = transfer::transfer_gdrazin_with(t, Resolvent::Literal, tol);
    singular || matches!(attempt, Err(TransferError::LiteralFactorSingular))
}

fn engine_checks<T: Scalar>(m: &Matrix<T>, tol: Tolerance) -> Vec<(&'static str, Outcome)> {
    let r = match drazin::drazin(m, tol) {
        Ok(r) => r,
        Err(e) => return vec![("drazin axioms", Outcome::Fail(e.to_string()))],
    };
    let axioms = if drazin::satisfies_drazin_axioms(m, &r.d_inv, r.index, tol) {
        Outcome::Pass
    } else {
        Outcome::Fail(format!("Drazin axioms fail at index {}", r.index))
    };
    let group = match drazin::group_inverse(m, tol) {
        Ok(_) if r.index <= 1 => Outcome::Pass,
        Err(DrazinError::NotGroupInvertible { .. }) if r.index > 1 => Outcome::Pass,
        Ok(_) => Outcome::Fail(format!("group inverse returned at index {}", r.index)),
        Err(e) => Outcome::Fail(e.to_string()),
    };
    let lemma = match drazin::lemma21_witness(m, &r.d_inv, 1, Default::default(), tol) {
        Ok(w) => {
            let e_ok = w.e.approx_eq(&(m * &r.d_inv), tol);
            match drazin::lemma21_from_witness(m, &w, tol) {
                Ok(ad) if e_ok && ad.approx_eq(&r.d_inv, tol) => Outcome::Pass,
                Ok(_) => Outcome::Fail("lemma21 output or e differs from a a^D".into()),
                Err(e) => Outcome::Fail(e.to_string()),
            }
        }
        Err(e) => Outcome::Fail(e.to_string()),
    };
    vec![
        ("drazin axioms", axioms),
        ("group invertible iff index<=1", group),
        ("lemma21 recovers drazin", lemma),
    ]
}
