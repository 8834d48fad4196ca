//! Jacobson-type transfer formulas between `1 - ba` and `1 - ac`.
//!
//! Every transfer computes its closed-form answer and an independent direct
//! answer, then checks the defining axioms of the target inverse on the
//! closed form. Residuals are reported even on the exact backend.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::drazin::{self, DrazinError, IdempotentSum};
use crate::matrix::{Matrix, MatrixError};
use crate::scalar::{Scalar, Tolerance};

/// How a triple was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyKind {
    PaperExample,
    Trivial,
    Corach,
    BlockNilpotent,
    RandomSearch,
    /// Supplied from outside the generators.
    Input,
}

impl StrategyKind {
    pub fn label(self) -> &'static str {
        match self {
            StrategyKind::PaperExample => "paper_example",
            StrategyKind::Trivial => "trivial",
            StrategyKind::Corach => "corach",
            StrategyKind::BlockNilpotent => "block_nilpotent",
            StrategyKind::RandomSearch => "random_search",
            StrategyKind::Input => "input",
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransferError {
    #[error("extended condition fails: {first_failing}")]
    ConditionViolated { first_failing: String },
    #[error("1 - ab is singular (1 - ba singular: {ba_singular})")]
    JacobsonSingular { ba_singular: bool },
    #[error("{which} is not group invertible (index {index})")]
    NotGroupInvertible { which: &'static str, index: usize },
    #[error("literal factor 1 - α(1+ba) = (ba)^2 is singular")]
    LiteralFactorSingular,
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error(transparent)]
    Drazin(#[from] DrazinError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Names of the four products in `a(ba)^2 = abaca = acaba = (ac)^2 a`.
pub const CONDITION_TERMS: [&str; 4] = ["a(ba)^2", "abaca", "acaba", "(ac)^2a"];

/// The four products of the extended condition and their pairwise verdicts.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport<T> {
    pub products: [Matrix<T>; 4],
    /// `(i, j, equal)` for every pair `i < j`.
    pub pairs: Vec<(usize, usize, bool)>,
}

impl<T: Scalar> ConditionReport<T> {
    pub fn holds(&self) -> bool {
        self.pairs.iter().all(|&(_, _, eq)| eq)
    }

    /// First unequal pair, named, e.g. `"abaca != acaba"`.
    pub fn first_failure(&self) -> Option<String> {
        self.pairs
            .iter()
            .find(|&&(_, _, eq)| !eq)
            .map(|&(i, j, _)| format!("{} != {}", CONDITION_TERMS[i], CONDITION_TERMS[j]))
    }
}

fn same_dims<T: Scalar>(ms: &[&Matrix<T>]) -> Result<(), MatrixError> {
    let first = ms[0];
    for m in ms {
        if !m.is_square() {
            return Err(MatrixError::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        if m.rows() != first.rows() {
            return Err(MatrixError::DimensionMismatch {
                left: format!("{0}x{0}", first.rows()),
                right: format!("{0}x{0}", m.rows()),
            });
        }
    }
    Ok(())
}

pub fn extended_condition_report<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    c: &Matrix<T>,
    tol: Tolerance,
) -> Result<ConditionReport<T>, MatrixError> {
    same_dims(&[a, b, c])?;
    let ab = a * b;
    let ac = a * c;
    let aba = &ab * a;
    let aca = &ac * a;
    let products = [
        &aba * &(b * a),
        &aba * &(c * a),
        &aca * &(b * a),
        &(&ac * &ac) * a,
    ];
    let mut pairs = Vec::with_capacity(6);
    for i in 0..4 {
        for j in i + 1..4 {
            pairs.push((i, j, products[i].approx_eq(&products[j], tol)));
        }
    }
    Ok(ConditionReport { products, pairs })
}

/// `a(ba)^2 = abaca = acaba = (ac)^2 a`.
pub fn check_extended_condition<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    c: &Matrix<T>,
    tol: Tolerance,
) -> Result<bool, MatrixError> {
    Ok(extended_condition_report(a, b, c, tol)?.holds())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Triple<T> {
    pub a: Matrix<T>,
    pub b: Matrix<T>,
    pub c: Matrix<T>,
    pub condition_ok: bool,
    pub source: StrategyKind,
    pub seed: u64,
}

impl<T: Scalar> Triple<T> {
    /// Builds a triple and evaluates the extended condition on it.
    pub fn new(
        a: Matrix<T>,
        b: Matrix<T>,
        c: Matrix<T>,
        source: StrategyKind,
        seed: u64,
        tol: Tolerance,
    ) -> Result<Self, MatrixError> {
        let condition_ok = check_extended_condition(&a, &b, &c, tol)?;
        Ok(Triple {
            a,
            b,
            c,
            condition_ok,
            source,
            seed,
        })
    }

    pub fn n(&self) -> usize {
        self.a.n()
    }

    fn require_condition(&self, tol: Tolerance) -> Result<(), TransferError> {
        let report = extended_condition_report(&self.a, &self.b, &self.c, tol)?;
        match report.first_failure() {
            None => Ok(()),
            Some(first_failing) => Err(TransferError::ConditionViolated { first_failing }),
        }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&Matrix<T>) -> Matrix<U>) -> Triple<U> {
        Triple {
            a: f(&self.a),
            b: f(&self.b),
            c: f(&self.c),
            condition_ok: self.condition_ok,
            source: self.source,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransferKind {
    Classic,
    Zhuang,
    Cline,
    Gdrazin,
    Lambda,
    Drazin,
    Group,
}

/// One checked identity: residual is `max |re| + |im|` of `lhs - rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub name: String,
    pub residual: String,
    pub residual_f64: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransferReport<T> {
    pub kind: TransferKind,
    pub formula_output: Matrix<T>,
    pub direct_output: Matrix<T>,
    pub identities: Vec<IdentityCheck>,
    /// Index of `1 - ba` (`1 - ab` for the pair transfers).
    pub index_alpha: usize,
    /// Index of the target, `1 - ac` for triple transfers.
    pub index_beta: usize,
    pub passed: bool,
}

impl<T: Scalar> TransferReport<T> {
    fn assemble(
        kind: TransferKind,
        formula_output: Matrix<T>,
        direct_output: Matrix<T>,
        mut identities: Vec<IdentityCheck>,
        index_alpha: usize,
        index_beta: usize,
        tol: Tolerance,
    ) -> Self {
        identities.push(equality_check(
            "formula=direct",
            &formula_output,
            &direct_output,
            tol,
        ));
        let passed = identities.iter().all(|c| c.pass);
        TransferReport {
            kind,
            formula_output,
            direct_output,
            identities,
            index_alpha,
            index_beta,
            passed,
        }
    }

    pub fn identity(&self, name: &str) -> Option<&IdentityCheck> {
        self.identities.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.identities.iter().filter(|c| !c.pass)
    }
}

fn residual_check<T: Scalar>(name: &str, residual: &Matrix<T>, pass: bool) -> IdentityCheck {
    let norm = residual.residual_norm();
    IdentityCheck {
        name: name.to_string(),
        residual: norm.to_string(),
        residual_f64: T::norm_to_f64(&norm),
        pass,
    }
}

fn equality_check<T: Scalar>(
    name: &str,
    lhs: &Matrix<T>,
    rhs: &Matrix<T>,
    tol: Tolerance,
) -> IdentityCheck {
    residual_check(name, &(lhs - rhs), lhs.approx_eq(rhs, tol))
}

fn bound_check(name: &str, holds: bool) -> IdentityCheck {
    IdentityCheck {
        name: name.to_string(),
        residual: if holds { "0" } else { "1" }.to_string(),
        residual_f64: if holds { 0.0 } else { 1.0 },
        pass: holds,
    }
}

/// Generalized Drazin axioms for `y` as an inverse of `beta`:
/// `y = y beta y`, `beta y = y beta`, `beta - beta^2 y` nilpotent.
pub fn gdrazin_axiom_checks<T: Scalar>(
    beta: &Matrix<T>,
    y: &Matrix<T>,
    tol: Tolerance,
) -> Vec<IdentityCheck> {
    let by = beta * y;
    let yb = y * beta;
    let yby = &yb * y;
    let defect = beta - &(beta * &by);
    let nil_power = defect.pow(beta.n() as u32);
    vec![
        equality_check("y=yby", y, &yby, tol),
        equality_check("by=yb", &by, &yb, tol),
        residual_check(
            "b-b2y nilpotent",
            &nil_power,
            drazin::is_quasinilpotent(&defect, tol),
        ),
    ]
}

/// Group-inverse axioms for `y` as an inverse of `beta`.
pub fn group_axiom_checks<T: Scalar>(
    beta: &Matrix<T>,
    y: &Matrix<T>,
    tol: Tolerance,
) -> Vec<IdentityCheck> {
    let by = beta * y;
    let yb = y * beta;
    vec![
        equality_check("b=byb", beta, &(&by * beta), tol),
        equality_check("y=yby", y, &(&yb * y), tol),
        equality_check("by=yb", &by, &yb, tol),
    ]
}

/// Commutation facts the transfer relies on: `baca` commutes with `ba`
/// and with `1 - ba`.
pub fn commutation_checks<T: Scalar>(t: &Triple<T>, tol: Tolerance) -> Vec<IdentityCheck> {
    let ba = &t.b * &t.a;
    let baca = &(&ba * &t.c) * &t.a;
    let alpha = &Matrix::identity(t.n()) - &ba;
    vec![
        equality_check("(baca)(ba)=(ba)(baca)", &(&baca * &ba), &(&ba * &baca), tol),
        equality_check("(baca)α=α(baca)", &(&baca * &alpha), &(&alpha * &baca), tol),
    ]
}

/// `(β + 1 - e)^{-1} e` with `e` built from `βy` at `m = 2`: the inverse the
/// characterization lemma yields once `y` is a witness for `β`.
pub fn lemma21_completion<T: Scalar>(
    beta: &Matrix<T>,
    y: &Matrix<T>,
    tol: Tolerance,
) -> Result<Matrix<T>, DrazinError> {
    let witness = drazin::lemma21_witness(beta, y, 2, IdempotentSum::Binomial, tol)?;
    drazin::lemma21_from_witness(beta, &witness, tol)
}

pub const COMPLETION_CHECK: &str = "lemma21(b,y,2)=direct";

fn completion_check<T: Scalar>(
    beta: &Matrix<T>,
    y: &Matrix<T>,
    direct: &Matrix<T>,
    tol: Tolerance,
) -> IdentityCheck {
    match lemma21_completion(beta, y, tol) {
        Ok(z) => equality_check(COMPLETION_CHECK, &z, direct, tol),
        Err(_) => bound_check(COMPLETION_CHECK, false),
    }
}

/// Classic Jacobson lemma: `(1 - ba)^{-1} = 1 + b (1 - ab)^{-1} a`.
pub fn classic_jacobson<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    tol: Tolerance,
) -> Result<TransferReport<T>, TransferError> {
    same_dims(&[a, b])?;
    let id = Matrix::identity(a.n());
    let one_minus_ab = &id - &(a * b);
    let one_minus_ba = &id - &(b * a);
    let Ok(inv_ab) = one_minus_ab.inverse(tol) else {
        return Err(TransferError::JacobsonSingular {
            ba_singular: one_minus_ba.inverse(tol).is_err(),
        });
    };
    let formula = &id + &(&(b * &inv_ab) * a);
    let direct = one_minus_ba.inverse(tol).map_err(|_| {
        TransferError::InternalInconsistency("1 - ab invertible but 1 - ba singular".into())
    })?;
    let identities = vec![
        equality_check("(1-ba)y=1", &(&one_minus_ba * &formula), &id, tol),
        equality_check("y(1-ba)=1", &(&formula * &one_minus_ba), &id, tol),
    ];
    Ok(TransferReport::assemble(
        TransferKind::Classic,
        formula,
        direct,
        identities,
        0,
        0,
        tol,
    ))
}

/// Zhuang's transfer: `(1 - ba)^d = 1 + b (1 - ab)^d a`.
///
/// The closed form satisfies `y β y = y` only when `b (1-ab)^π a = 0`;
/// the report carries that term as its own identity.
pub fn zhuang_transfer<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    tol: Tolerance,
) -> Result<TransferReport<T>, TransferError> {
    same_dims(&[a, b])?;
    let id = Matrix::identity(a.n());
    let one_minus_ab = &id - &(a * b);
    let one_minus_ba = &id - &(b * a);
    let source = drazin::drazin(&one_minus_ab, tol)?;
    let target = drazin::drazin(&one_minus_ba, tol)?;
    let formula = &id + &(&(b * &source.d_inv) * a);
    let mut identities = gdrazin_axiom_checks(&one_minus_ba, &formula, tol);
    // The closed form is a g-Drazin inverse exactly when this term vanishes.
    let leak = &(b * &source.idempotent) * a;
    identities.push(residual_check(
        "b(1-ab)^πa=0",
        &leak,
        leak.is_negligible(tol, a.max_norm() * b.max_norm()),
    ));
    Ok(TransferReport::assemble(
        TransferKind::Zhuang,
        formula,
        target.d_inv,
        identities,
        source.index,
        target.index,
        tol,
    ))
}

/// Cline's formula under the extended condition: `(ba)^d = b ((ac)^d)^2 a`.
pub fn cline_transfer<T: Scalar>(
    t: &Triple<T>,
    tol: Tolerance,
) -> Result<TransferReport<T>, TransferError> {
    t.require_condition(tol)?;
    let ba = &t.b * &t.a;
    let ac = &t.a * &t.c;
    let ac_d = drazin::drazin(&ac, tol)?;
    let ba_d = drazin::drazin(&ba, tol)?;
    let formula = &(&t.b * &(&ac_d.d_inv * &ac_d.d_inv)) * &t.a;
    let identities = gdrazin_axiom_checks(&ba, &formula, tol);
    Ok(TransferReport::assemble(
        TransferKind::Cline,
        formula,
        ba_d.d_inv,
        identities,
        ba_d.index,
        ac_d.index,
        tol,
    ))
}

/// Form of the inverted factor in the generalized Jacobson formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Resolvent {
    /// `1 - α^π α (1 + ba)`, always invertible since `α^π α` is nilpotent.
    #[default]
    Projected,
    /// `1 - α (1 + ba)`, which equals `(ba)^2` and is singular whenever `ba` is.
    Literal,
}

/// The pieces of `1 - ba` the formula consumes.
struct AlphaData<T> {
    ba: Matrix<T>,
    alpha: Matrix<T>,
    p: Matrix<T>,
    index: usize,
}

fn alpha_data<T: Scalar>(
    t: &Triple<T>,
    tol: Tolerance,
) -> Result<(AlphaData<T>, Matrix<T>), TransferError> {
    let ba = &t.b * &t.a;
    let alpha = &Matrix::identity(t.n()) - &ba;
    let r = drazin::drazin(&alpha, tol)?;
    Ok((
        AlphaData {
            ba,
            alpha,
            p: r.idempotent,
            index: r.index,
        },
        r.d_inv,
    ))
}

/// `[1 - a p R^{-1} bac](1 + ac) + a x bac` with `R` the chosen resolvent
/// and `x` an inverse of `α`.
fn jacobson_formula<T: Scalar>(
    t: &Triple<T>,
    data: &AlphaData<T>,
    x: &Matrix<T>,
    resolvent: Resolvent,
    tol: Tolerance,
) -> Result<Matrix<T>, TransferError> {
    let id = Matrix::identity(t.n());
    let one_plus_ba = &id + &data.ba;
    let factor = match resolvent {
        Resolvent::Projected => &id - &(&(&data.p * &data.alpha) * &one_plus_ba),
        Resolvent::Literal => &id - &(&data.alpha * &one_plus_ba),
    };
    let factor_inv = factor.inverse(tol).map_err(|_| match resolvent {
        Resolvent::Projected => {
            TransferError::InternalInconsistency("1 - α^π α (1 + ba) is singular".into())
        }
        Resolvent::Literal => TransferError::LiteralFactorSingular,
    })?;
    let ac = &t.a * &t.c;
    let bac = &(&t.b * &t.a) * &t.c;
    let correction = &(&(&t.a * &data.p) * &factor_inv) * &bac;
    let left = &(&id - &correction) * &(&id + &ac);
    Ok(&left + &(&(&t.a * x) * &bac))
}

/// Generalized Drazin inverse of `1 - ac` from data of `1 - ba`.
pub fn transfer_gdrazin<T: Scalar>(
    t: &Triple<T>,
    tol: Tolerance,
) -> Result<TransferReport<T>, TransferError> {
    transfer_gdrazin_with(t, Resolvent::Projected, tol)
}

pub fn transfer_gdrazin_with<T: Scalar>(
    t: &Triple<T>,
    resolvent: Resolvent,
    tol: Tolerance,
) -> Result<TransferReport<T>, TransferError> {
    t.require_condition(tol)?;
    let (data, x) = alpha_data(t, tol)?;
    let formula = jacobson_formula(t, &data, &x, resolvent, tol)?;
    let beta = &Matrix::identity(t.n()) - &(&t.a * &t.c);
    let direct = drazin::drazin(&beta, tol)?;
    let mut identities = gdrazin_axiom_checks(&beta, &formula, tol);
    identities.extend(commutation_checks(t, tol));
    identities.push(completion_check(&beta, &formula, &direct.d_inv, tol));
    Ok(TransferReport::assemble(
        TransferKind::Gdrazin,
        formula,
        direct.d_inv,
        identities,
        data.index,
        direct.index,
        tol,
    ))
}

/// Whether the literal factor `1 - α(1 + ba)` can be inverted for `t`.
pub fn literal_factor_is_singular<T: Scalar>(t: &Triple<T>, tol: Tolerance) -> bool {
    let id = Matrix::identity(t.n());
    let ba = &t.b * &t.a;
    let factor = &id - &(&(&id - &ba) * &(&id + &ba));
    factor.inverse(tol).is_err()
}

/// `(λ - ac)^d` from `λ - ba`. For `λ = 0` this is `-a ((ba)^d)^2 c`;
/// otherwise the triple is rescaled to `(a, b/λ, c/λ)` and
/// `(λ - ac)^d = λ^{-1} (1 - a c/λ)^d`.
pub fn transfer_lambda<T: Scalar>(
    t: &Triple<T>,
    lambda: &T,
    tol: Tolerance,
) -> Result<TransferReport<T>, TransferError> {
    t.require_condition(tol)?;
    let n = t.n();
    let id = Matrix::identity(n);
    let ac = &t.a * &t.c;
    let beta = &id.scale(lambda) - &ac;
    let direct = drazin::drazin(&beta, tol)?;

    let (formula, index_alpha) = if lambda.is_zero() {
        let ba_d = drazin::drazin(&(&t.b * &t.a), tol)?;
        let sq = &ba_d.d_inv * &ba_d.d_inv;
        (-&(&(&t.a * &sq) * &t.c), ba_d.index)
    } else {
        let inv_lambda = T::one() / lambda.clone();
        let scaled = Triple {
            a: t.a.clone(),
            b: t.b.scale(&inv_lambda),
            c: t.c.scale(&inv_lambda),
            condition_ok: t.condition_ok,
            source: t.source,
            seed: t.seed,
        };
        scaled.require_condition(tol)?;
        let (data, x) = alpha_data(&scaled, tol)?;
        let unit = jacobson_formula(&scaled, &data, &x, Resolvent::Projected, tol)?;
        (unit.scale(&inv_lambda), data.index)
    };
    let mut identities = gdrazin_axiom_checks(&beta, &formula, tol);
    if !lambda.is_zero() {
        identities.push(completion_check(&beta, &formula, &direct.d_inv, tol));
    }
    Ok(TransferReport::assemble(
        TransferKind::Lambda,
        formula,
        direct.d_inv,
        identities,
        index_alpha,
        direct.index,
        tol,
    ))
}

/// Drazin version: same formula, plus the Drazin power axiom and the
/// index bounds `i(1-ac) <= i(1-ba) + 1` and `i(1-ba) <= i(1-ac) + 1`.
pub fn transfer_drazin<T: Scalar>(
    t: &Triple<T>,
    tol: Tolerance,
) -> Result<TransferReport<T>, TransferError> {
    t.require_condition(tol)?;
    let (data, x) = alpha_data(t, tol)?;
    let formula = jacobson_formula(t, &data, &x, Resolvent::Projected, tol)?;
    let beta = &Matrix::identity(t.n()) - &(&t.a * &t.c);
    let direct = drazin::drazin(&beta, tol)?;
    let k = direct.index as u32;
    let bk = beta.pow(k);
    let mut identities = gdrazin_axiom_checks(&beta, &formula, tol);
    identities.push(equality_check(
        "b^k=b^(k+1)y",
        &bk,
        &(&(&bk * &beta) * &formula),
        tol,
    ));
    identities.push(bound_check(
        INDEX_BOUND_BETA,
        direct.index <= data.index + 1,
    ));
    identities.push(bound_check(
        INDEX_BOUND_ALPHA,
        data.index <= direct.index + 1,
    ));
    identities.push(completion_check(&beta, &formula, &direct.d_inv, tol));
    Ok(TransferReport::assemble(
        TransferKind::Drazin,
        formula,
        direct.d_inv,
        identities,
        data.index,
        direct.index,
        tol,
    ))
}

/// `i(1-ac) <= i(1-ba) + 1`.
pub const INDEX_BOUND_BETA: &str = "i(1-ac)<=i(1-ba)+1";
/// `i(1-ba) <= i(1-ac) + 1`.
pub const INDEX_BOUND_ALPHA: &str = "i(1-ba)<=i(1-ac)+1";

/// Group-inverse version; requires `i(1 - ba) <= 1`.
pub fn transfer_group<T: Scalar>(
    t: &Triple<T>,
    tol: Tolerance,
) -> Result<TransferReport<T>, TransferError> {
    t.require_condition(tol)?;
    let (data, x) = alpha_data(t, tol)?;
    if data.index > 1 {
        return Err(TransferError::NotGroupInvertible {
            which: "1 - ba",
            index: data.index,
        });
    }
    let formula = jacobson_formula(t, &data, &x, Resolvent::Projected, tol)?;
    let beta = &Matrix::identity(t.n()) - &(&t.a * &t.c);
    let index_beta = drazin::index(&beta, tol);
    let direct = drazin::group_inverse(&beta, tol).map_err(|e| match e {
        DrazinError::NotGroupInvertible { index } => TransferError::NotGroupInvertible {
            which: "1 - ac",
            index,
        },
        other => other.into(),
    })?;
    let mut identities = group_axiom_checks(&beta, &formula, tol);
    identities.extend(commutation_checks(t, tol));
    identities.push(completion_check(&beta, &formula, &direct, tol));
    Ok(TransferReport::assemble(
        TransferKind::Group,
        formula,
        direct,
        identities,
        data.index,
        index_beta,
        tol,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{self, example_33};
    use crate::matrix::ExactMatrix as M;
    use crate::scalar::Gaussian;

    const EXACT: Tolerance = Tolerance::exact();

    fn scalar(v: i64) -> M {
        M::from_i64_rows(&[&[v]]).unwrap()
    }

    fn triple(a: M, b: M, c: M) -> Triple<Gaussian> {
        Triple::new(a, b, c, StrategyKind::Input, 0, EXACT).unwrap()
    }

    #[test]
    fn condition_examples() {
        let t = example_33();
        let report = extended_condition_report(&t.a, &t.b, &t.c, EXACT).unwrap();
        assert!(report.holds() && report.products.iter().all(Matrix::is_zero));

        let a = M::from_i64_rows(&[&[1, 2], &[3, 4]]).unwrap();
        let b = M::from_i64_rows(&[&[0, 1], &[-1, 2]]).unwrap();
        assert!(check_extended_condition(&a, &b, &b, EXACT).unwrap());

        let mut c = t.c.clone();
        c.set(0, 0, Gaussian::int(2));
        let report = extended_condition_report(&t.a, &t.b, &c, EXACT).unwrap();
        assert!(!report.holds());
        assert!(report.first_failure().is_some());
        assert!(matches!(
            transfer_gdrazin(&triple(t.a.clone(), t.b.clone(), c), EXACT),
            Err(TransferError::ConditionViolated { .. })
        ));
        assert!(check_extended_condition(&a, &b, &M::identity(3), EXACT).is_err());
    }

    #[test]
    fn classic_jacobson_cases() {
        let a = M::from_i64_rows(&[&[1, 2], &[3, 4]]).unwrap();
        let r = classic_jacobson(&a, &M::zeros(2), EXACT).unwrap();
        assert!(r.passed);
        assert_eq!(r.formula_output, M::identity(2));

        let r = classic_jacobson(&scalar(2), &scalar(3), EXACT).unwrap();
        assert!(r.passed);
        assert_eq!(r.formula_output.get(0, 0), &Gaussian::from_ratio(-1, 5));

        assert_eq!(
            classic_jacobson(&M::identity(2), &M::identity(2), EXACT),
            Err(TransferError::JacobsonSingular { ba_singular: true })
        );
    }

    #[test]
    fn zhuang_cases() {
        let a = M::from_i64_rows(&[&[1, 2], &[3, 4]]).unwrap();
        let r = zhuang_transfer(&a, &M::zeros(2), EXACT).unwrap();
        assert!(r.passed);
        assert_eq!(r.formula_output, M::identity(2));
        // a = b = I: both 1 - ab and 1 - ba vanish, so the direct side is 0
        // while the closed form gives I.
        let r = zhuang_transfer(&M::identity(3), &M::identity(3), EXACT).unwrap();
        assert!(!r.passed);
        assert_eq!(r.formula_output, M::identity(3));
        assert!(r.direct_output.is_zero());
        assert!(!r.identity("b(1-ab)^πa=0").unwrap().pass);
    }

    #[test]
    fn cline_cases() {
        let id = M::identity(3);
        let r = cline_transfer(&triple(id.clone(), id.clone(), id.clone()), EXACT).unwrap();
        assert!(r.passed);
        assert_eq!(r.formula_output, id);
        let r = cline_transfer(&example_33(), EXACT).unwrap();
        assert!(r.passed, "{:?}", r.failures().collect::<Vec<_>>());
        let t = generator::gen_trivial(3, 5, 3).unwrap();
        assert!(cline_transfer(&t, EXACT).unwrap().passed);
    }

    #[test]
    fn gdrazin_on_fixture_matches_printed_inverse() {
        let r = transfer_gdrazin(&example_33(), EXACT).unwrap();
        assert!(r.passed);
        assert_eq!(r.formula_output, generator::example_33_group_inverse_ac());
        assert_eq!(r.identity("y=yby").unwrap().residual, "0");
    }

    #[test]
    fn gdrazin_with_zero_b_and_c() {
        let a = M::from_i64_rows(&[&[1, 2], &[3, 4]]).unwrap();
        let r = transfer_gdrazin(&triple(a, M::zeros(2), M::zeros(2)), EXACT).unwrap();
        assert!(r.passed);
        assert_eq!(r.formula_output, M::identity(2));
        assert_eq!((r.index_alpha, r.index_beta), (0, 0));
    }

    #[test]
    fn gdrazin_with_singular_alpha() {
        for seed in 0..12 {
            let t = generator::gen_corach(4, seed, 3).unwrap();
            let r = transfer_gdrazin(&t, EXACT).unwrap();
            assert!(
                r.passed,
                "seed {seed}: {:?}",
                r.failures().collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn lambda_reductions() {
        let t = generator::gen_corach(4, 3, 3).unwrap();
        let unit = transfer_lambda(&t, &Gaussian::one(), EXACT).unwrap();
        let direct = transfer_gdrazin(&t, EXACT).unwrap();
        assert!(unit.passed);
        assert_eq!(unit.formula_output, direct.formula_output);

        let r = transfer_lambda(&example_33(), &Gaussian::zero(), EXACT).unwrap();
        assert!(r.passed, "{:?}", r.failures().collect::<Vec<_>>());

        let t = generator::gen_trivial(3, 9, 3).unwrap();
        let r = transfer_lambda(&t, &Gaussian::int(2), EXACT).unwrap();
        assert!(r.passed);
        let r = transfer_lambda(&t, &"1/2+1/3i".parse().unwrap(), EXACT).unwrap();
        assert!(r.passed);
    }

    #[test]
    fn drazin_version_indices() {
        let z = M::zeros(3);
        let r = transfer_drazin(&triple(z.clone(), z.clone(), z), EXACT).unwrap();
        assert!(r.passed);
        assert_eq!((r.index_alpha, r.index_beta), (0, 0));

        // Both 1 - BA and 1 - AC are unipotent for the fixture.
        let r = transfer_drazin(&example_33(), EXACT).unwrap();
        assert!(r.passed);
        assert_eq!((r.index_alpha, r.index_beta), (0, 0));
        assert!(r.identity(INDEX_BOUND_BETA).unwrap().pass);
        assert!(r.identity(INDEX_BOUND_ALPHA).unwrap().pass);
    }

    #[test]
    fn group_version() {
        let r = transfer_group(&example_33(), EXACT).unwrap();
        assert!(r.passed);
        assert_eq!(r.formula_output, generator::example_33_group_inverse_ac());

        let a = M::from_i64_rows(&[&[0, 1], &[1, 0]]).unwrap();
        let r = transfer_group(&triple(a, M::zeros(2), M::zeros(2)), EXACT).unwrap();
        assert_eq!(r.formula_output, M::identity(2));

        // b a = 1 + J_2 gives 1 - ba = -J_2 of index 2.
        let a = M::identity(2);
        let b = M::from_i64_rows(&[&[1, 1], &[0, 1]]).unwrap();
        assert_eq!(
            transfer_group(&triple(a, b.clone(), b), EXACT),
            Err(TransferError::NotGroupInvertible {
                which: "1 - ba",
                index: 2
            })
        );
    }

    #[test]
    fn literal_factor_is_singular_on_fixture() {
        let t = example_33();
        assert!(literal_factor_is_singular(&t, EXACT));
        assert_eq!(
            transfer_gdrazin_with(&t, Resolvent::Literal, EXACT),
            Err(TransferError::LiteralFactorSingular)
        );
    }

    #[test]
    fn commutation_facts_hold() {
        for seed in 1..8 {
            let t = generator::gen_block_nilpotent(5, seed, 3).unwrap();
            assert!(commutation_checks(&t, EXACT).iter().all(|c| c.pass));
        }
    }

    #[test]
    fn printed_closed_form_fails_with_zero_b() {
        // a(ba)^2 = abaca = acaba = (ac)^2 a = 0, yet (ac)^2 = J^2 != 0.
        let a = M::diag(vec![Gaussian::one(), Gaussian::one(), Gaussian::zero()]);
        let c = M::from_i64_rows(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]).unwrap();
        let t = triple(a, M::zeros(3), c.clone());
        assert!(t.condition_ok);
        let r = transfer_gdrazin(&t, EXACT).unwrap();
        assert!(!r.passed);
        assert_eq!(r.formula_output, &M::identity(3) + &c);
        assert_eq!(r.direct_output, &(&M::identity(3) + &c) + &(&c * &c));
        assert!(!r.identity("formula=direct").unwrap().pass);
        assert!(r.identity("by=yb").unwrap().pass);
        assert!(r.identity(COMPLETION_CHECK).unwrap().pass);
    }

    #[test]
    fn completion_recovers_direct_on_block_triples() {
        for seed in 1..6 {
            let t = generator::gen_block_nilpotent(5, seed, 3).unwrap();
            let r = transfer_gdrazin(&t, EXACT).unwrap();
            assert!(r.identity(COMPLETION_CHECK).unwrap().pass, "seed {seed}");
        }
    }
}
