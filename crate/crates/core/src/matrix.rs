//! Dense matrices over a [`Scalar`] and the elimination routines built on them.
//!
//! Public constructors only produce square matrices. Rectangular shapes exist
//! inside the crate for full-rank factorizations and kernel bases.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

use crate::scalar::{Gaussian, Scalar, Tolerance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: String, right: String },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix dimension must be positive")]
    Empty,
    #[error("expected {expected} entries, got {got}")]
    WrongEntryCount { expected: usize, got: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("entry ({row}, {col}) cannot be represented on the exact backend")]
    NotRepresentable { row: usize, col: usize },
}

#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type ExactMatrix = Matrix<Gaussian>;
pub type FloatMatrix = Matrix<Complex64>;

impl<T: std::fmt::Debug> std::fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl<T: Scalar> Matrix<T> {
    /// Square matrix from row-major entries.
    pub fn new(n: usize, entries: Vec<T>) -> Result<Self, MatrixError> {
        if n == 0 {
            return Err(MatrixError::Empty);
        }
        if entries.len() != n * n {
            return Err(MatrixError::WrongEntryCount {
                expected: n * n,
                got: entries.len(),
            });
        }
        Ok(Matrix {
            rows: n,
            cols: n,
            data: entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, MatrixError> {
        let n = rows.len();
        if n == 0 {
            return Err(MatrixError::Empty);
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(MatrixError::NotSquare {
                rows: n,
                cols: bad.len(),
            });
        }
        Matrix::new(n, rows.into_iter().flatten().collect())
    }

    /// Integer matrix, convenient for fixtures.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self, MatrixError> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| T::from_i64(v)).collect())
                .collect(),
        )
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> T) -> Self {
        Matrix::rect_from_fn(n, n, f)
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn zeros(n: usize) -> Self {
        Matrix::rect_zeros(n, n)
    }

    pub fn diag(values: Vec<T>) -> Self {
        let n = values.len();
        let mut m = Matrix::zeros(n);
        for (i, v) in values.into_iter().enumerate() {
            m.data[i * n + i] = v;
        }
        m
    }

    pub(crate) fn rect_from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> T,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub(crate) fn rect_zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    /// Dimension of a square matrix.
    pub fn n(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Matrix::rect_from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn conj_transpose(&self) -> Self {
        Matrix::rect_from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub(crate) fn select_columns(&self, cols: &[usize]) -> Self {
        Matrix::rect_from_fn(self.rows, cols.len(), |i, j| self.get(i, cols[j]).clone())
    }

    pub(crate) fn select_rows(&self, rows: &[usize]) -> Self {
        Matrix::rect_from_fn(rows.len(), self.cols, |i, j| self.get(rows[i], j).clone())
    }

    fn same_shape(&self, other: &Self) -> Result<(), MatrixError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(self.mismatch(other));
        }
        Ok(())
    }

    fn mismatch(&self, other: &Self) -> MatrixError {
        MatrixError::DimensionMismatch {
            left: format!("{}x{}", self.rows, self.cols),
            right: format!("{}x{}", other.rows, other.cols),
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.cols != other.rows {
            return Err(self.mismatch(other));
        }
        let mut out = Matrix::rect_zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let lhs = self.get(i, k);
                if lhs.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let rhs = other.get(k, j);
                    if rhs.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    let acc = std::mem::replace(&mut out.data[idx], T::zero());
                    out.data[idx] = acc + lhs.clone() * rhs.clone();
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, MatrixError> {
        self.same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a.clone() + b.clone()))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, MatrixError> {
        self.same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a.clone() - b.clone()))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, lambda: &T) -> Self {
        self.map(|v| lambda.clone() * v.clone())
    }

    /// `A^k` by repeated squaring; `A^0 = I`.
    pub fn pow(&self, mut k: u32) -> Self {
        assert!(self.is_square(), "power of a non-square matrix");
        let mut result = Matrix::identity(self.rows);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(T::modulus).fold(0.0, f64::max)
    }

    /// Largest `|re| + |im|` over the entries, exact on the exact backend.
    pub fn residual_norm(&self) -> T::Norm {
        let mut best = T::norm_zero();
        for v in &self.data {
            let n = v.norm1();
            if n > best {
                best = n;
            }
        }
        best
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(T::is_zero)
    }

    /// Zero test with an absolute scale: exact on the exact backend, otherwise
    /// every entry must be within `eps_rel * max(scale, 1)`.
    pub fn is_negligible(&self, tol: Tolerance, scale: f64) -> bool {
        let threshold = tol.eps_rel * scale.max(1.0);
        self.data.iter().all(|v| v.is_negligible(threshold))
    }

    /// Backend equality: exact entrywise, or max-norm relative on floats.
    pub fn approx_eq(&self, other: &Self, tol: Tolerance) -> bool {
        if self.rows != other.rows || self.cols != other.cols {
            return false;
        }
        let scale = self.max_norm().max(other.max_norm());
        self.zip_with(other, |a, b| a.clone() - b.clone())
            .is_negligible(tol, scale)
    }

    /// Threshold below which a float pivot counts as zero.
    fn pivot_threshold(&self, tol: Tolerance) -> f64 {
        tol.eps_rel * (self.rows.max(self.cols) as f64) * self.max_norm()
    }

    /// Reduced row echelon form and pivot columns.
    ///
    /// Exact: first nonzero pivot in each column. Float: largest modulus,
    /// with candidates below `eps_rel * n * ‖A‖_max` treated as zero.
    pub fn rref(&self, tol: Tolerance) -> (Self, Vec<usize>) {
        let threshold = self.pivot_threshold(tol);
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let candidate = match T::BACKEND {
                crate::scalar::Backend::Exact => (row..m.rows).find(|&r| !m.get(r, col).is_zero()),
                crate::scalar::Backend::Float => (row..m.rows)
                    .map(|r| (r, m.get(r, col).modulus()))
                    .filter(|&(_, v)| v > threshold)
                    .max_by(|x, y| x.1.total_cmp(&y.1))
                    .map(|(r, _)| r),
            };
            let Some(p) = candidate else {
                for r in row..m.rows {
                    m.set(r, col, T::zero());
                }
                continue;
            };
            m.swap_rows(row, p);
            let inv = T::one() / m.get(row, col).clone();
            for j in col..m.cols {
                let v = m.get(row, j).clone() * inv.clone();
                m.set(row, j, v);
            }
            m.set(row, col, T::one());
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in col..m.cols {
                    let v = m.get(r, j).clone() - factor.clone() * m.get(row, j).clone();
                    m.set(r, j, v);
                }
                m.set(r, col, T::zero());
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self, tol: Tolerance) -> usize {
        self.rref(tol).1.len()
    }

    /// Basis of `{x : A x = 0}` as columns (cols x nullity).
    pub fn null_space(&self, tol: Tolerance) -> Self {
        let (r, pivots) = self.rref(tol);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Matrix::rect_zeros(self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            basis.set(f, k, T::one());
            for (prow, &pcol) in pivots.iter().enumerate() {
                basis.set(pcol, k, -r.get(prow, f).clone());
            }
        }
        basis
    }

    /// Full-rank factorization `A = F G` with `F` the pivot columns of `A`
    /// and `G` the nonzero rows of its reduced echelon form.
    pub(crate) fn full_rank_factorization(&self, tol: Tolerance) -> (Self, Self) {
        let (r, pivots) = self.rref(tol);
        let g = r.select_rows(&(0..pivots.len()).collect::<Vec<_>>());
        let f = self.select_columns(&pivots);
        (f, g)
    }

    /// Gauss-Jordan inverse; `Singular` when some pivot vanishes.
    pub fn inverse(&self, tol: Tolerance) -> Result<Self, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = Matrix::rect_from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                T::one()
            } else {
                T::zero()
            }
        });
        let threshold = self.pivot_threshold(tol);
        for col in 0..n {
            let candidate = match T::BACKEND {
                crate::scalar::Backend::Exact => (col..n).find(|&r| !aug.get(r, col).is_zero()),
                crate::scalar::Backend::Float => (col..n)
                    .map(|r| (r, aug.get(r, col).modulus()))
                    .filter(|&(_, v)| v > threshold && v > 0.0)
                    .max_by(|x, y| x.1.total_cmp(&y.1))
                    .map(|(r, _)| r),
            };
            let p = candidate.ok_or(MatrixError::Singular)?;
            aug.swap_rows(col, p);
            let inv = T::one() / aug.get(col, col).clone();
            for j in 0..2 * n {
                let v = aug.get(col, j).clone() * inv.clone();
                aug.set(col, j, v);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = aug.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in 0..2 * n {
                    let v = aug.get(r, j).clone() - factor.clone() * aug.get(col, j).clone();
                    aug.set(r, j, v);
                }
            }
        }
        Ok(Matrix::rect_from_fn(n, n, |i, j| aug.get(i, j + n).clone()))
    }

    pub fn commutes_with(&self, other: &Self, tol: Tolerance) -> bool {
        (self * other).approx_eq(&(other * self), tol)
    }
}

impl ExactMatrix {
    pub fn to_float(&self) -> FloatMatrix {
        self.map(Gaussian::to_complex)
    }
}

impl FloatMatrix {
    /// Exact dyadic image of every entry; fails on non-finite values.
    pub fn to_exact(&self) -> Result<ExactMatrix, MatrixError> {
        let mut data = Vec::with_capacity(self.data.len());
        for (k, z) in self.data.iter().enumerate() {
            data.push(
                Gaussian::from_complex(*z).ok_or(MatrixError::NotRepresentable {
                    row: k / self.cols,
                    col: k % self.cols,
                })?,
            );
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }
}

/// Checked product.
pub fn mat_mul<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>, MatrixError> {
    a.try_mul(b)
}

pub fn mat_add<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>, MatrixError> {
    a.try_add(b)
}

pub fn mat_scale<T: Scalar>(lambda: &T, a: &Matrix<T>) -> Matrix<T> {
    a.scale(lambda)
}

pub fn mat_pow<T: Scalar>(a: &Matrix<T>, k: u32) -> Matrix<T> {
    a.pow(k)
}

pub fn mat_eq<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    tol: Tolerance,
) -> Result<bool, MatrixError> {
    a.same_shape(b)?;
    Ok(a.approx_eq(b, tol))
}

pub fn rank<T: Scalar>(a: &Matrix<T>, tol: Tolerance) -> usize {
    a.rank(tol)
}

pub fn inverse<T: Scalar>(a: &Matrix<T>, tol: Tolerance) -> Result<Matrix<T>, MatrixError> {
    a.inverse(tol)
}

// Operator forms panic on shape mismatch; the `try_*` methods report it.

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.try_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl<T: Scalar> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.try_add(rhs).expect("matrix sum shape mismatch")
    }
}

impl<T: Scalar> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.try_sub(rhs).expect("matrix difference shape mismatch")
    }
}

impl<T: Scalar> Neg for &Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        self.map(|v| -v.clone())
    }
}
