//! JSON encodings for matrices, triples and transfer reports.
//!
//! Matrix: `{"n": 2, "backend": "exact", "entries": [["1/1", "0/1"], ...]}`.
//! Exact entries are strings `p/q` or `p/q±r/si`; float entries are `[re, im]`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::matrix::{ExactMatrix, FloatMatrix, Matrix, MatrixError};
use crate::scalar::{Backend, Gaussian, Scalar, Tolerance};
use crate::transfer::{StrategyKind, TransferReport, Triple};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("entry ({row}, {col}): {msg}")]
    Entry { row: usize, col: usize, msg: String },
    #[error("declared n = {declared} but entries form {rows} rows")]
    Shape { declared: usize, rows: usize },
    #[error("triple mixes backends")]
    MixedBackends,
    #[error("unknown strategy `{0}`")]
    Strategy(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Per-backend entry encoding.
pub trait JsonScalar: Scalar {
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self, String>;
}

impl JsonScalar for Gaussian {
    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }

    fn from_json(v: &Value) -> Result<Self, String> {
        match v {
            Value::String(s) => s.parse().map_err(|e| format!("{e}")),
            Value::Number(n) if n.is_i64() => Ok(Gaussian::int(n.as_i64().unwrap_or_default())),
            other => Err(format!("expected a rational string, got {other}")),
        }
    }
}

impl JsonScalar for Complex64 {
    fn to_json(&self) -> Value {
        json!([self.re, self.im])
    }

    fn from_json(v: &Value) -> Result<Self, String> {
        let part = |x: &Value| {
            x.as_f64()
                .ok_or_else(|| format!("expected a number, got {x}"))
        };
        match v {
            Value::Array(xs) if xs.len() == 2 => Ok(Complex64::new(part(&xs[0])?, part(&xs[1])?)),
            Value::Number(_) => Ok(Complex64::new(part(v)?, 0.0)),
            other => Err(format!("expected [re, im], got {other}")),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixDoc {
    n: usize,
    backend: Backend,
    entries: Vec<Vec<Value>>,
}

/// A matrix whose backend is only known at runtime.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyMatrix {
    Exact(ExactMatrix),
    Float(FloatMatrix),
}

impl AnyMatrix {
    pub fn backend(&self) -> Backend {
        match self {
            AnyMatrix::Exact(_) => Backend::Exact,
            AnyMatrix::Float(_) => Backend::Float,
        }
    }

    /// Converts to `backend`; float to exact is lossless (dyadic rationals).
    pub fn into_backend(self, backend: Backend) -> Result<AnyMatrix, MatrixError> {
        Ok(match (self, backend) {
            (AnyMatrix::Exact(m), Backend::Float) => AnyMatrix::Float(m.to_float()),
            (AnyMatrix::Float(m), Backend::Exact) => AnyMatrix::Exact(m.to_exact()?),
            (same, _) => same,
        })
    }

    pub fn to_json(&self) -> Value {
        match self {
            AnyMatrix::Exact(m) => matrix_to_json(m),
            AnyMatrix::Float(m) => matrix_to_json(m),
        }
    }
}

pub fn matrix_to_json<T: JsonScalar>(m: &Matrix<T>) -> Value {
    let entries: Vec<Vec<Value>> = (0..m.rows())
        .map(|i| m.row(i).iter().map(JsonScalar::to_json).collect())
        .collect();
    let doc = MatrixDoc {
        n: m.rows(),
        backend: T::BACKEND,
        entries,
    };
    serde_json::to_value(doc).expect("matrix document serializes")
}

fn decode_entries<T: JsonScalar>(doc: &MatrixDoc) -> Result<Matrix<T>, IoError> {
    if doc.entries.len() != doc.n {
        return Err(IoError::Shape {
            declared: doc.n,
            rows: doc.entries.len(),
        });
    }
    let mut data = Vec::with_capacity(doc.n * doc.n);
    for (row, values) in doc.entries.iter().enumerate() {
        if values.len() != doc.n {
            return Err(MatrixError::NotSquare {
                rows: doc.n,
                cols: values.len(),
            }
            .into());
        }
        for (col, v) in values.iter().enumerate() {
            data.push(T::from_json(v).map_err(|msg| IoError::Entry { row, col, msg })?);
        }
    }
    Ok(Matrix::new(doc.n, data)?)
}

fn decode_matrix(v: Value) -> Result<AnyMatrix, IoError> {
    let doc: MatrixDoc = serde_json::from_value(v)?;
    Ok(match doc.backend {
        Backend::Exact => AnyMatrix::Exact(decode_entries(&doc)?),
        Backend::Float => AnyMatrix::Float(decode_entries(&doc)?),
    })
}

pub fn parse_matrix(text: &str) -> Result<AnyMatrix, IoError> {
    decode_matrix(serde_json::from_str(text)?)
}

/// Parses a matrix that must be on backend `T`.
pub fn parse_matrix_as<T: JsonScalar>(text: &str) -> Result<Matrix<T>, IoError> {
    let doc: MatrixDoc = serde_json::from_str(text)?;
    if doc.backend != T::BACKEND {
        return Err(IoError::MixedBackends);
    }
    decode_entries(&doc)
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnyTriple {
    Exact(Triple<Gaussian>),
    Float(Triple<Complex64>),
}

impl AnyTriple {
    pub fn backend(&self) -> Backend {
        match self {
            AnyTriple::Exact(_) => Backend::Exact,
            AnyTriple::Float(_) => Backend::Float,
        }
    }

    pub fn into_backend(self, backend: Backend) -> Result<AnyTriple, MatrixError> {
        let tol = Tolerance::for_backend(backend);
        Ok(match (self, backend) {
            (AnyTriple::Exact(t), Backend::Float) => {
                let f = t.map(ExactMatrix::to_float);
                AnyTriple::Float(Triple::new(f.a, f.b, f.c, f.source, f.seed, tol)?)
            }
            (AnyTriple::Float(t), Backend::Exact) => AnyTriple::Exact(Triple::new(
                t.a.to_exact()?,
                t.b.to_exact()?,
                t.c.to_exact()?,
                t.source,
                t.seed,
                tol,
            )?),
            (same, _) => same,
        })
    }

    pub fn to_json(&self) -> Value {
        match self {
            AnyTriple::Exact(t) => triple_to_json(t),
            AnyTriple::Float(t) => triple_to_json(t),
        }
    }
}

pub fn triple_to_json<T: JsonScalar>(t: &Triple<T>) -> Value {
    json!({
        "a": matrix_to_json(&t.a),
        "b": matrix_to_json(&t.b),
        "c": matrix_to_json(&t.c),
        "strategy": t.source.label(),
        "seed": t.seed,
    })
}

#[derive(Deserialize)]
struct TripleDoc {
    a: Value,
    b: Value,
    c: Value,
    #[serde(default)]
    strategy: Option<String>,
    #[serde(default)]
    seed: u64,
}

fn parse_strategy(label: Option<&str>) -> Result<StrategyKind, IoError> {
    let Some(label) = label else {
        return Ok(StrategyKind::Input);
    };
    serde_json::from_value(Value::String(label.to_string()))
        .map_err(|_| IoError::Strategy(label.to_string()))
}

/// Parses a triple; the condition flag is recomputed, never trusted.
pub fn parse_triple(text: &str, eps_rel: Option<f64>) -> Result<AnyTriple, IoError> {
    let doc: TripleDoc = serde_json::from_str(text)?;
    let source = parse_strategy(doc.strategy.as_deref())?;
    let parts = (
        decode_matrix(doc.a)?,
        decode_matrix(doc.b)?,
        decode_matrix(doc.c)?,
    );
    Ok(match parts {
        (AnyMatrix::Exact(a), AnyMatrix::Exact(b), AnyMatrix::Exact(c)) => {
            AnyTriple::Exact(Triple::new(a, b, c, source, doc.seed, Tolerance::exact())?)
        }
        (AnyMatrix::Float(a), AnyMatrix::Float(b), AnyMatrix::Float(c)) => {
            let tol = eps_rel.map_or(Tolerance::for_backend(Backend::Float), |eps_rel| {
                Tolerance { eps_rel }
            });
            AnyTriple::Float(Triple::new(a, b, c, source, doc.seed, tol)?)
        }
        _ => return Err(IoError::MixedBackends),
    })
}

pub fn report_to_json<T: JsonScalar>(r: &TransferReport<T>) -> Value {
    let identities: Vec<Value> = r
        .identities
        .iter()
        .map(|c| json!({ "name": c.name, "pass": c.pass, "residual": c.residual }))
        .collect();
    json!({
        "kind": r.kind,
        "formula": matrix_to_json(&r.formula_output),
        "direct": matrix_to_json(&r.direct_output),
        "identities": identities,
        "index_alpha": r.index_alpha,
        "index_beta": r.index_beta,
        "passed": r.passed,
    })
}
