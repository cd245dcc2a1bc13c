//! Dense complex linear algebra: Hermitian eigensolver, singular values,
//! fractional powers, Loewner order and seeded random PSD matrices.

pub mod eigh;
pub mod json;
pub mod loewner;
pub mod lu;
pub mod matrix;
pub mod psd;
pub mod random;
pub mod svd;

pub use eigh::{eigh, eigvalsh, SpectralDecomposition};
pub use json::MatrixJson;
pub use loewner::{loewner_geq, loewner_geq_abs, LoewnerVerdict};
pub use matrix::{GeneralMatrix, HermitianMatrix, C64};
pub use psd::{matrix_power, PsdMatrix};
pub use random::{random_psd, Field, RandomPsdConfig};
pub use svd::{op_norm, singular_values, SingularValues};

use crate::error::{HeinzError, Result};

/// Eigenvalues of `AB`, computed from the Hermitian form `A^{1/2} B A^{1/2}`.
pub fn product_eigenvalues(a: &PsdMatrix, b: &PsdMatrix) -> Result<Vec<f64>> {
    if a.dim() != b.dim() {
        return Err(HeinzError::DimensionMismatch {
            context: "product_eigenvalues",
            left: (a.dim(), a.dim()),
            right: (b.dim(), b.dim()),
        });
    }
    let half = a.sqrt();
    let sym = b.base().congruence(half.as_general())?;
    eigvalsh(&sym)
}

/// Eigenvalues of `F H F*`, sorted non-increasing.
pub fn congruence_eigenvalues(h: &HermitianMatrix, factor: &HermitianMatrix) -> Result<Vec<f64>> {
    eigvalsh(&h.congruence(factor.as_general())?)
}
