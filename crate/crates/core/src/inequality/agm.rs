use serde::Serialize;

use crate::error::{HeinzError, Result};
use crate::linalg::{singular_values, GeneralMatrix, PsdMatrix};
use crate::means::{arithmetic_three, geometric_three, heinz_three};
use crate::verdict::{IndexedVerdict, Tolerances};

/// Ky Fan norms (`k = 1..n`) of the geometric, Heinz and arithmetic sides.
#[derive(Debug, Clone, Serialize)]
pub struct AgmChain {
    pub nu: f64,
    pub geometric: Vec<f64>,
    pub heinz: Vec<f64>,
    pub arithmetic: Vec<f64>,
    /// `‖A^{1/2}XB^{1/2}‖_(k) ≤ ‖H_ν‖_(k)`.
    pub left: IndexedVerdict,
    /// `‖H_ν‖_(k) ≤ ‖(AX+XB)/2‖_(k)`.
    pub right: IndexedVerdict,
}

impl AgmChain {
    pub fn holds(&self) -> bool {
        self.left.holds && self.right.holds
    }
}

fn ky_fan_profile(m: &GeneralMatrix) -> Result<Vec<f64>> {
    let sigma = singular_values(m)?;
    Ok(sigma
        .values
        .iter()
        .scan(0.0, |acc, s| {
            *acc += s;
            Some(*acc)
        })
        .collect())
}

/// Geometric–Heinz–arithmetic chain for every Ky Fan norm, which by Fan
/// dominance covers all unitarily invariant norms. `x` defaults to `I`.
pub fn agm_chain_check(
    a: &PsdMatrix,
    b: &PsdMatrix,
    nu: f64,
    x: Option<&GeneralMatrix>,
    tol: &Tolerances,
) -> Result<AgmChain> {
    let identity;
    let x = match x {
        Some(x) => x,
        None => {
            identity = GeneralMatrix::identity(a.dim());
            &identity
        }
    };
    if x.shape() != (a.dim(), b.dim()) {
        return Err(HeinzError::DimensionMismatch {
            context: "agm_chain_check",
            left: x.shape(),
            right: (a.dim(), b.dim()),
        });
    }
    let geometric = ky_fan_profile(&geometric_three(a, x, b)?)?;
    let heinz = ky_fan_profile(&heinz_three(a, x, b, nu)?)?;
    let arithmetic = ky_fan_profile(&arithmetic_three(a, x, b)?)?;
    let scale = 1.0
        + arithmetic
            .last()
            .copied()
            .unwrap_or(0.0)
            .max(heinz.last().copied().unwrap_or(0.0));
    let left = IndexedVerdict::leq(&geometric, &heinz, tol.loewner_rel, scale);
    let right = IndexedVerdict::leq(&heinz, &arithmetic, tol.loewner_rel, scale);
    Ok(AgmChain {
        nu,
        geometric,
        heinz,
        arithmetic,
        left,
        right,
    })
}

/// Per-index comparison `σ_j(A^{1/2}B^{1/2}) ≤ σ_j(H_ν(A, B))`; this is *not*
/// a theorem and fails for suitable pairs and small `ν`.
pub fn geometric_heinz_singular_values(
    a: &PsdMatrix,
    b: &PsdMatrix,
    nu: f64,
    tol: &Tolerances,
) -> Result<IndexedVerdict> {
    let x = GeneralMatrix::identity(a.dim());
    let geom = singular_values(&geometric_three(a, &x, b)?)?;
    let heinz = singular_values(&heinz_three(a, &x, b, nu)?)?;
    let scale = 1.0 + heinz.largest().max(geom.largest());
    Ok(IndexedVerdict::leq(&geom.values, &heinz.values, tol.loewner_rel, scale))
}
