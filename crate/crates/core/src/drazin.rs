//! Drazin index, Drazin and group inverses, spectral idempotents.
//!
//! In `M_n(C)` the generalized Drazin inverse coincides with the Drazin
//! inverse and quasinilpotent means nilpotent, so one engine serves both.

use thiserror::Error;

use crate::matrix::{Matrix, MatrixError};
use crate::scalar::{Scalar, Tolerance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DrazinError {
    #[error("not group invertible: index {index} > 1")]
    NotGroupInvertible { index: usize },
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("constructed e is not idempotent; m = {m} is too small for this b")]
    NonIdempotentE { m: u32 },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DrazinResult<T> {
    /// `A^D`.
    pub d_inv: Matrix<T>,
    /// Drazin index `i(A)`.
    pub index: usize,
    /// `A^π = I - A A^D`.
    pub idempotent: Matrix<T>,
    pub group_invertible: bool,
}

/// Smallest `k` with `A^k` of given rank, together with `A^k`.
fn index_and_power<T: Scalar>(a: &Matrix<T>, tol: Tolerance) -> (usize, Matrix<T>) {
    let n = a.n();
    let mut power = Matrix::identity(n);
    let mut rank = n;
    for k in 0..=n {
        let next = &power * a;
        let next_rank = next.rank(tol);
        if next_rank == rank {
            return (k, power);
        }
        power = next;
        rank = next_rank;
    }
    // Ranks strictly decrease until they stabilize, so k <= n.
    unreachable!("rank sequence failed to stabilize within n steps")
}

/// Drazin index: smallest `k >= 0` with `rank(A^k) = rank(A^{k+1})`.
pub fn index<T: Scalar>(a: &Matrix<T>, tol: Tolerance) -> usize {
    index_and_power(a, tol).0
}

/// Drazin inverse by full-rank factorization: with `A^k = F G`,
/// `A^D = F (G A F)^{-1} G`.
pub fn drazin<T: Scalar>(a: &Matrix<T>, tol: Tolerance) -> Result<DrazinResult<T>, DrazinError> {
    if !a.is_square() {
        return Err(MatrixError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        }
        .into());
    }
    let n = a.n();
    let (k, power) = index_and_power(a, tol);
    let d_inv = if k == 0 {
        a.inverse(tol).map_err(|_| {
            DrazinError::InternalInconsistency("index 0 but elimination found A singular".into())
        })?
    } else {
        let (f, g) = power.full_rank_factorization(tol);
        if f.cols() == 0 {
            Matrix::zeros(n)
        } else {
            let core = &(&g * a) * &f;
            let core_inv = core.inverse(tol).map_err(|_| {
                DrazinError::InternalInconsistency(format!(
                    "G·A·F is singular for rank-{} factor of A^{k}",
                    f.cols()
                ))
            })?;
            &(&f * &core_inv) * &g
        }
    };
    let idempotent = &Matrix::identity(n) - &(a * &d_inv);
    Ok(DrazinResult {
        d_inv,
        index: k,
        idempotent,
        group_invertible: k <= 1,
    })
}

/// Group inverse; fails with `NotGroupInvertible` when the index exceeds one.
pub fn group_inverse<T: Scalar>(a: &Matrix<T>, tol: Tolerance) -> Result<Matrix<T>, DrazinError> {
    let result = drazin(a, tol)?;
    if !result.group_invertible {
        return Err(DrazinError::NotGroupInvertible {
            index: result.index,
        });
    }
    Ok(result.d_inv)
}

/// `A^π = I - A A^D`.
pub fn spectral_idempotent<T: Scalar>(
    a: &Matrix<T>,
    tol: Tolerance,
) -> Result<Matrix<T>, DrazinError> {
    Ok(drazin(a, tol)?.idempotent)
}

/// Nilpotency test `A^n = 0`, which is quasinilpotency in `M_n(C)`.
pub fn is_quasinilpotent<T: Scalar>(a: &Matrix<T>, tol: Tolerance) -> bool {
    let n = a.n();
    let scale = a.max_norm().max(1.0).powi(n as i32);
    a.pow(n as u32).is_negligible(tol, scale)
}

/// Checks `X A X = X`, `A X = X A` and `A^k = A^{k+1} X`.
pub fn satisfies_drazin_axioms<T: Scalar>(
    a: &Matrix<T>,
    x: &Matrix<T>,
    k: usize,
    tol: Tolerance,
) -> bool {
    let xax = &(x * a) * x;
    let ak = a.pow(k as u32);
    let ak1x = &(&ak * a) * x;
    xax.approx_eq(x, tol) && a.commutes_with(x, tol) && ak.approx_eq(&ak1x, tol)
}

/// Which sum builds the idempotent `e` from `u = ab`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IdempotentSum {
    /// `sum_{i<m} C(2m, i) u^{2m-i} (1-u)^i`, the lower half of `(u + (1-u))^{2m}`.
    #[default]
    Binomial,
    /// The same sum without binomial coefficients.
    Plain,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma21Witness<T> {
    pub b: Matrix<T>,
    pub m: u32,
    pub e: Matrix<T>,
}

fn binomial(n: u32, k: u32) -> Option<i64> {
    let mut acc: i64 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as i64)? / (i as i64 + 1);
    }
    Some(acc)
}

/// Builds and checks the idempotent `e` for a commuting candidate `b`.
pub fn lemma21_witness<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    m: u32,
    sum: IdempotentSum,
    tol: Tolerance,
) -> Result<Lemma21Witness<T>, DrazinError> {
    let violated = |msg: &str| Err(DrazinError::PreconditionViolated(msg.to_string()));
    if a.rows() != b.rows() || !a.is_square() || !b.is_square() {
        return Err(MatrixError::DimensionMismatch {
            left: format!("{}x{}", a.rows(), a.cols()),
            right: format!("{}x{}", b.rows(), b.cols()),
        }
        .into());
    }
    if m == 0 || m > 30 {
        return violated("m must lie in 1..=30");
    }
    if !a.commutes_with(b, tol) {
        return violated("b does not commute with a");
    }
    let n = a.n();
    let id = Matrix::identity(n);
    let u = a * b;
    let defect = &u - &(&u * &u);
    let scale = a.max_norm().max(1.0) * b.max_norm().max(1.0);
    if !defect.pow(m).is_negligible(tol, scale.powi(2 * m as i32)) {
        return violated("[ab - (ab)^2]^m is not zero");
    }
    if !is_quasinilpotent(&(a - &(&(a * a) * b)), tol) {
        return violated("a - a^2 b is not nilpotent");
    }

    let complement = &id - &u;
    let mut e = Matrix::zeros(n);
    for i in 0..m {
        let term = &u.pow(2 * m - i) * &complement.pow(i);
        let term = match sum {
            IdempotentSum::Binomial => {
                let coeff = binomial(2 * m, i).expect("binomial fits for m <= 30");
                term.scale(&T::from_i64(coeff))
            }
            IdempotentSum::Plain => term,
        };
        e = &e + &term;
    }
    if !(&e * &e).approx_eq(&e, tol) {
        return Err(DrazinError::NonIdempotentE { m });
    }
    Ok(Lemma21Witness { b: b.clone(), m, e })
}

/// `a^d = (a + 1 - e)^{-1} e` from a commuting candidate `b`.
pub fn lemma21_gdrazin<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    m: u32,
    tol: Tolerance,
) -> Result<Matrix<T>, DrazinError> {
    let witness = lemma21_witness(a, b, m, IdempotentSum::Binomial, tol)?;
    lemma21_from_witness(a, &witness, tol)
}

pub fn lemma21_from_witness<T: Scalar>(
    a: &Matrix<T>,
    witness: &Lemma21Witness<T>,
    tol: Tolerance,
) -> Result<Matrix<T>, DrazinError> {
    let shifted = &(a + &Matrix::identity(a.n())) - &witness.e;
    let inv = shifted.inverse(tol).map_err(|_| {
        DrazinError::InternalInconsistency("a + 1 - e is singular despite the hypotheses".into())
    })?;
    Ok(&inv * &witness.e)
}
