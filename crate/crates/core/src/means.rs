//! Heinz means and unitarily invariant norms.
//!
//! Only the Ky Fan and Schatten families (plus their operator/trace special
//! cases) are provided. Fan dominance makes the Ky Fan norms sufficient: an
//! inequality that holds for every Ky Fan `k`-norm holds for every unitarily
//! invariant norm, so the norm-chain checkers sweep `k` and nothing else.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_range, HeinzError, Result};
use crate::linalg::{singular_values, GeneralMatrix, PsdMatrix};

/// The interpolation parameter `ν ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct HeinzParams {
    nu: f64,
}

impl HeinzParams {
    pub fn new(nu: f64) -> Result<Self> {
        check_range("nu", nu, 0.0, 1.0, "[0, 1]")?;
        Ok(Self { nu })
    }

    pub fn nu(self) -> f64 {
        self.nu
    }

    /// Exponent pair `(ν', 1 - ν')` with `ν' ≤ 1/2`, so that `ν` and `1 - ν`
    /// map to the same pair whenever they are exact complements.
    fn exponents(self) -> (f64, f64) {
        let lo = if self.nu <= 0.5 { self.nu } else { 1.0 - self.nu };
        (lo, 1.0 - lo)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormSpec {
    KyFan(usize),
    Schatten(f64),
    Operator,
    Trace,
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormSpec::KyFan(k) => write!(f, "ky_fan:{k}"),
            NormSpec::Schatten(p) => write!(f, "schatten:{p}"),
            NormSpec::Operator => write!(f, "operator"),
            NormSpec::Trace => write!(f, "trace"),
        }
    }
}

impl FromStr for NormSpec {
    type Err = HeinzError;

    /// `ky_fan:K`, `schatten:P`, `operator` or `trace`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || HeinzError::Config(format!("unknown norm '{s}'"));
        let (kind, arg) = match s.split_once(':') {
            Some((k, a)) => (k, Some(a)),
            None => (s, None),
        };
        let spec = match (kind, arg) {
            ("operator", None) => NormSpec::Operator,
            ("trace", None) => NormSpec::Trace,
            ("ky_fan", Some(a)) => NormSpec::KyFan(a.parse().map_err(|_| bad())?),
            ("schatten", Some(a)) => NormSpec::Schatten(a.parse().map_err(|_| bad())?),
            _ => return Err(bad()),
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl NormSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            NormSpec::KyFan(0) => Err(HeinzError::KyFanIndex { k: 0, max: 0 }),
            NormSpec::Schatten(p) if p.is_nan() || p < 1.0 || p.is_infinite() => Err(HeinzError::ParamOutOfRange {
                name: "schatten p",
                value: p,
                range: "[1, inf)",
            }),
            _ => Ok(()),
        }
    }

    /// Evaluates the norm from singular values sorted non-increasing.
    pub fn of_singular_values(&self, sigma: &[f64]) -> Result<f64> {
        self.validate()?;
        Ok(match *self {
            NormSpec::KyFan(k) => {
                if k > sigma.len() {
                    return Err(HeinzError::KyFanIndex { k, max: sigma.len() });
                }
                sigma[..k].iter().sum()
            }
            NormSpec::Schatten(p) => {
                let top = sigma.first().copied().unwrap_or(0.0);
                if top == 0.0 {
                    0.0
                } else {
                    top * sigma.iter().map(|s| (s / top).powf(p)).sum::<f64>().powf(1.0 / p)
                }
            }
            NormSpec::Operator => sigma.first().copied().unwrap_or(0.0),
            NormSpec::Trace => sigma.iter().sum(),
        })
    }
}

/// Scalar Heinz mean `(a^ν b^{1-ν} + a^{1-ν} b^ν)/2`, with `0^0 = 1`.
pub fn heinz_scalar(a: f64, b: f64, nu: f64) -> Result<f64> {
    check_range("a", a, 0.0, f64::MAX, "[0, inf)")?;
    check_range("b", b, 0.0, f64::MAX, "[0, inf)")?;
    let (lo, hi) = HeinzParams::new(nu)?.exponents();
    Ok((a.powf(lo) * b.powf(hi) + a.powf(hi) * b.powf(lo)) / 2.0)
}

/// Matrix Heinz mean `(A^ν B^{1-ν} + A^{1-ν} B^ν)/2`. Not Hermitian unless
/// `A` and `B` commute.
pub fn heinz_matrix(a: &PsdMatrix, b: &PsdMatrix, nu: f64) -> Result<GeneralMatrix> {
    if a.dim() != b.dim() {
        return Err(HeinzError::DimensionMismatch {
            context: "heinz_matrix",
            left: (a.dim(), a.dim()),
            right: (b.dim(), b.dim()),
        });
    }
    heinz_three(a, &GeneralMatrix::identity(a.dim()), b, nu)
}

/// `(A^ν X B^{1-ν} + A^{1-ν} X B^ν)/2` for `A` of order `n`, `B` of order `m`
/// and `X` of shape `n x m`.
pub fn heinz_three(a: &PsdMatrix, x: &GeneralMatrix, b: &PsdMatrix, nu: f64) -> Result<GeneralMatrix> {
    if x.rows() != a.dim() || x.cols() != b.dim() {
        return Err(HeinzError::DimensionMismatch {
            context: "heinz_three",
            left: (a.dim(), b.dim()),
            right: x.shape(),
        });
    }
    let (lo, hi) = HeinzParams::new(nu)?.exponents();
    let a_lo = a.power(lo)?;
    let a_hi = a.power(hi)?;
    let b_lo = b.power(lo)?;
    let b_hi = b.power(hi)?;
    let first = a_lo.as_general().matmul(x)?.matmul(b_hi.as_general())?;
    let second = a_hi.as_general().matmul(x)?.matmul(b_lo.as_general())?;
    Ok(first.try_add(&second)?.scale(0.5))
}

/// `A^{1/2} X B^{1/2}`, the geometric-mean end of the chain.
pub fn geometric_three(a: &PsdMatrix, x: &GeneralMatrix, b: &PsdMatrix) -> Result<GeneralMatrix> {
    a.sqrt().as_general().matmul(x)?.matmul(b.sqrt().as_general())
}

/// `(AX + XB)/2`, the arithmetic-mean end of the chain.
pub fn arithmetic_three(a: &PsdMatrix, x: &GeneralMatrix, b: &PsdMatrix) -> Result<GeneralMatrix> {
    let ax = a.as_general().matmul(x)?;
    let xb = x.matmul(b.as_general())?;
    Ok(ax.try_add(&xb)?.scale(0.5))
}

pub fn norm(m: &GeneralMatrix, spec: NormSpec) -> Result<f64> {
    spec.validate()?;
    if let NormSpec::KyFan(k) = spec {
        let max = m.rows().min(m.cols());
        if k > max {
            return Err(HeinzError::KyFanIndex { k, max });
        }
    }
    spec.of_singular_values(&singular_values(m)?.values)
}
