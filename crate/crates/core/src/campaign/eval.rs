//! One-shot evaluation of a matrix operation on JSON input.
//!
//! Input: `{"A": <matrix>, "B": <matrix>?, "X": <matrix>?}` with matrices in
//! the shared `{"rows", "cols", "entries"}` form.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{HeinzError, Result};
use crate::linalg::{GeneralMatrix, HermitianMatrix, MatrixJson, PsdMatrix};
use crate::means::{heinz_matrix, heinz_three, norm, NormSpec};
use crate::monotone::{eval_integral, eval_spectral, MonotoneFunctionSpec};

/// Relative anti-Hermitian residual below which an output is flagged Hermitian.
const HERMITIAN_FLAG_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalInput {
    #[serde(rename = "A", alias = "a")]
    pub a: MatrixJson,
    #[serde(rename = "B", alias = "b", default)]
    pub b: Option<MatrixJson>,
    #[serde(rename = "X", alias = "x", default)]
    pub x: Option<MatrixJson>,
}

impl EvalInput {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| HeinzError::Schema(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Spectral,
    Integral,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum EvalOp {
    Heinz {
        nu: f64,
    },
    Power {
        p: f64,
    },
    Norm {
        norm: String,
    },
    Monotone {
        function: MonotoneFunctionSpec,
        method: Method,
        quadrature_rel: f64,
    },
}

fn psd(m: &MatrixJson) -> Result<PsdMatrix> {
    PsdMatrix::from_general(&m.to_matrix()?)
}

fn required<'a>(m: &'a Option<MatrixJson>, name: &str) -> Result<&'a MatrixJson> {
    m.as_ref()
        .ok_or_else(|| HeinzError::Schema(format!("operation requires matrix {name}")))
}

fn is_hermitian(m: &GeneralMatrix) -> bool {
    m.is_square() && m.max_abs_diff(&m.adjoint()) <= HERMITIAN_FLAG_TOL * (1.0 + m.max_abs())
}

fn matrix_result(op: &EvalOp, m: &GeneralMatrix) -> Value {
    json!({
        "params": op,
        "hermitian": is_hermitian(m),
        "result": MatrixJson::from(m),
    })
}

fn hermitian_result(op: &EvalOp, h: &HermitianMatrix) -> Value {
    matrix_result(op, h.as_general())
}

/// Evaluates `op`; the output echoes the parameters exactly.
pub fn run_eval(input: &EvalInput, op: &EvalOp) -> Result<Value> {
    Ok(match op {
        EvalOp::Heinz { nu } => {
            let (a, b) = (psd(&input.a)?, psd(required(&input.b, "B")?)?);
            let m = match &input.x {
                Some(x) => heinz_three(&a, &x.to_matrix()?, &b, *nu)?,
                None => heinz_matrix(&a, &b, *nu)?,
            };
            matrix_result(op, &m)
        }
        EvalOp::Power { p } => hermitian_result(op, &psd(&input.a)?.power(*p)?),
        EvalOp::Norm { norm: spec } => {
            let spec: NormSpec = spec.parse()?;
            json!({
                "params": op,
                "result": norm(&input.a.to_matrix()?, spec)?,
            })
        }
        EvalOp::Monotone {
            function,
            method,
            quadrature_rel,
        } => {
            let a = psd(&input.a)?;
            let h = match method {
                Method::Spectral => eval_spectral(function, &a),
                Method::Integral => eval_integral(function, &a, *quadrature_rel)?,
            };
            hermitian_result(op, &h)
        }
    })
}
