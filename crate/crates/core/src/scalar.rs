//! Complex scalars on two backends: exact Gaussian rationals and `f64` pairs.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Which arithmetic a value lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Exact => f.write_str("exact"),
            Backend::Float => f.write_str("float"),
        }
    }
}

impl FromStr for Backend {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" => Ok(Backend::Exact),
            "float" => Ok(Backend::Float),
            other => Err(ParseScalarError(format!("unknown backend `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse scalar: {0}")]
pub struct ParseScalarError(pub String);

/// Field element used by every matrix routine.
///
/// `is_negligible` is the only place the two backends differ in kind: the
/// exact backend answers by structural zero test and ignores the threshold.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Nonnegative size measure used for residual reporting.
    type Norm: Clone + PartialOrd + fmt::Display + Send + Sync;

    const BACKEND: Backend;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn conj(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// Approximate modulus, used for pivot selection and float thresholds.
    fn modulus(&self) -> f64;
    /// `|re| + |im|`, exact on the exact backend.
    fn norm1(&self) -> Self::Norm;
    fn norm_zero() -> Self::Norm;
    fn norm_to_f64(n: &Self::Norm) -> f64;
    fn is_negligible(&self, threshold: f64) -> bool;
}

/// Exact complex number `re + im·i` with arbitrary-precision rational parts.
///
/// `BigRational` keeps both parts in lowest terms with a positive
/// denominator after every operation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gaussian {
    pub re: BigRational,
    pub im: BigRational,
}

impl Gaussian {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Gaussian { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Gaussian {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn int(v: i64) -> Self {
        Gaussian::real(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Exact conversion of a float pair (every finite `f64` is a dyadic rational).
    pub fn from_complex(z: Complex64) -> Option<Self> {
        Some(Gaussian {
            re: BigRational::from_float(z.re)?,
            im: BigRational::from_float(z.im)?,
        })
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

fn write_ratio(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
    write!(f, "{}/{}", r.numer(), r.denom())
}

/// Canonical text form: `p/q` for reals, `p/q+r/si` or `p/q-r/si` otherwise.
impl fmt::Display for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_ratio(f, &self.re)?;
        if !self.im.is_zero() {
            if self.im.is_negative() {
                f.write_str("-")?;
                write_ratio(f, &-self.im.clone())?;
            } else {
                f.write_str("+")?;
                write_ratio(f, &self.im)?;
            }
            f.write_str("i")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_ratio(s: &str) -> Result<BigRational, ParseScalarError> {
    let err = || ParseScalarError(format!("bad rational `{s}`"));
    let s = s.trim();
    if s.is_empty() {
        return Err(err());
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num.trim().parse().map_err(|_| err())?;
    let den: BigInt = den.trim().parse().map_err(|_| err())?;
    if !den.is_positive() {
        return Err(ParseScalarError(format!(
            "denominator must be positive in `{s}`"
        )));
    }
    Ok(BigRational::new(num, den))
}

impl FromStr for Gaussian {
    type Err = ParseScalarError;

    /// Accepts `p`, `p/q`, `p/q+r/si`, `p/q-r/si` and a bare imaginary `r/si`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let Some(body) = s.strip_suffix('i') else {
            return Ok(Gaussian::real(parse_ratio(s)?));
        };
        // The split point is the last sign that is not the leading one.
        let split = body
            .char_indices()
            .rev()
            .find(|&(i, ch)| i > 0 && (ch == '+' || ch == '-'))
            .map(|(i, _)| i);
        match split {
            Some(i) => {
                let re = parse_ratio(&body[..i])?;
                let im_text = &body[i..];
                let im_text = im_text.strip_prefix('+').unwrap_or(im_text);
                Ok(Gaussian::new(re, parse_ratio(im_text)?))
            }
            None => Ok(Gaussian::new(BigRational::zero(), parse_ratio(body)?)),
        }
    }
}

impl Add for Gaussian {
    type Output = Gaussian;
    fn add(self, rhs: Gaussian) -> Gaussian {
        Gaussian::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for Gaussian {
    type Output = Gaussian;
    fn sub(self, rhs: Gaussian) -> Gaussian {
        Gaussian::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for Gaussian {
    type Output = Gaussian;
    fn mul(self, rhs: Gaussian) -> Gaussian {
        if self.is_real() && rhs.is_real() {
            return Gaussian::real(self.re * rhs.re);
        }
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        Gaussian::new(re, im)
    }
}

impl Div for Gaussian {
    type Output = Gaussian;

    /// Panics on division by zero, like the rational parts do.
    fn div(self, rhs: Gaussian) -> Gaussian {
        if rhs.is_real() {
            return Gaussian::new(self.re / &rhs.re, self.im / &rhs.re);
        }
        let den = &rhs.re * &rhs.re + &rhs.im * &rhs.im;
        let re = (&self.re * &rhs.re + &self.im * &rhs.im) / &den;
        let im = (&self.im * &rhs.re - &self.re * &rhs.im) / &den;
        Gaussian::new(re, im)
    }
}

impl Neg for Gaussian {
    type Output = Gaussian;
    fn neg(self) -> Gaussian {
        Gaussian::new(-self.re, -self.im)
    }
}

impl Scalar for Gaussian {
    type Norm = BigRational;
    const BACKEND: Backend = Backend::Exact;

    fn zero() -> Self {
        Gaussian::real(BigRational::zero())
    }
    fn one() -> Self {
        Gaussian::real(BigRational::one())
    }
    fn from_i64(v: i64) -> Self {
        Gaussian::int(v)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Gaussian::real(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }
    fn conj(&self) -> Self {
        Gaussian::new(self.re.clone(), -self.im.clone())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn modulus(&self) -> f64 {
        self.to_complex().norm()
    }
    fn norm1(&self) -> BigRational {
        self.re.abs() + self.im.abs()
    }
    fn norm_zero() -> BigRational {
        BigRational::zero()
    }
    fn norm_to_f64(n: &BigRational) -> f64 {
        n.to_f64().unwrap_or(f64::INFINITY)
    }
    fn is_negligible(&self, _threshold: f64) -> bool {
        Scalar::is_zero(self)
    }
}

impl Scalar for Complex64 {
    type Norm = f64;
    const BACKEND: Backend = Backend::Float;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn modulus(&self) -> f64 {
        self.norm()
    }
    fn norm1(&self) -> f64 {
        self.l1_norm()
    }
    fn norm_zero() -> f64 {
        0.0
    }
    fn norm_to_f64(n: &f64) -> f64 {
        *n
    }
    fn is_negligible(&self, threshold: f64) -> bool {
        self.norm() <= threshold
    }
}

/// Relative equality threshold for the float backend.
///
/// The exact backend ignores it entirely.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub eps_rel: f64,
}

pub const DEFAULT_EPS_REL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ToleranceError {
    #[error("eps_rel must be finite and nonnegative, got {0}")]
    Invalid(f64),
    #[error("eps_rel = 0 is only meaningful on the exact backend")]
    ZeroOnFloat,
}

impl Tolerance {
    pub const fn exact() -> Self {
        Tolerance { eps_rel: 0.0 }
    }

    pub fn new(eps_rel: f64, backend: Backend) -> Result<Self, ToleranceError> {
        if !eps_rel.is_finite() || eps_rel < 0.0 {
            return Err(ToleranceError::Invalid(eps_rel));
        }
        if eps_rel == 0.0 && backend == Backend::Float {
            return Err(ToleranceError::ZeroOnFloat);
        }
        Ok(Tolerance { eps_rel })
    }

    /// Default threshold for a backend: zero for exact, `1e-9` for float.
    pub fn for_backend(backend: Backend) -> Self {
        match backend {
            Backend::Exact => Tolerance::exact(),
            Backend::Float => Tolerance {
                eps_rel: DEFAULT_EPS_REL,
            },
        }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            eps_rel: DEFAULT_EPS_REL,
        }
    }
}
