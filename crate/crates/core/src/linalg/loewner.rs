//! Loewner (PSD) order tests.

use serde::Serialize;

use super::eigh::{eigh, eigvalsh};
use super::matrix::HermitianMatrix;
use crate::error::{HeinzError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LoewnerVerdict {
    pub holds: bool,
    /// Smallest eigenvalue of `X - Y`.
    pub min_eig_of_gap: f64,
    /// Absolute threshold the witness was compared against.
    pub threshold: f64,
}

/// `X ⪰ Y` iff `λ_min(X - Y) ≥ -tol (1 + max(‖X‖, ‖Y‖))`.
pub fn loewner_geq(x: &HermitianMatrix, y: &HermitianMatrix, tol: f64) -> Result<LoewnerVerdict> {
    if x.dim() != y.dim() {
        return Err(HeinzError::DimensionMismatch {
            context: "loewner_geq",
            left: (x.dim(), x.dim()),
            right: (y.dim(), y.dim()),
        });
    }
    let scale = 1.0 + eigh(x)?.max_abs_eigenvalue().max(eigh(y)?.max_abs_eigenvalue());
    loewner_geq_abs(x, y, tol * scale)
}

/// Same test against a caller-supplied absolute threshold.
pub fn loewner_geq_abs(x: &HermitianMatrix, y: &HermitianMatrix, threshold: f64) -> Result<LoewnerVerdict> {
    let gap = x.try_sub(y)?;
    let min_eig = eigvalsh(&gap)?.last().copied().unwrap_or(0.0);
    Ok(LoewnerVerdict {
        holds: min_eig >= -threshold,
        min_eig_of_gap: min_eig,
        threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_multiples_of_identity() {
        let i = HermitianMatrix::identity(3);
        let two = i.scale(2.0);
        let v = loewner_geq(&two, &i, 1e-9).unwrap();
        assert!(v.holds);
        assert!((v.min_eig_of_gap - 1.0).abs() < 1e-15);
        let w = loewner_geq(&i, &two, 1e-9).unwrap();
        assert!(!w.holds);
        assert!((w.min_eig_of_gap + 1.0).abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatch() {
        let r = loewner_geq(&HermitianMatrix::identity(2), &HermitianMatrix::identity(3), 1e-9);
        assert!(matches!(r, Err(HeinzError::DimensionMismatch { .. })));
    }
}
