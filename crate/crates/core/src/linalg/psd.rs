//! Positive semidefinite matrices and their spectral calculus.

use super::eigh::{eigh, SpectralDecomposition};
use super::matrix::{GeneralMatrix, HermitianMatrix};
use crate::error::{check_range, HeinzError, Result};

/// Relative tolerance for accepting a matrix as PSD.
pub const TOL_PSD: f64 = 1e-10;

/// Eigenvalues below `NULL_REL * λ_max` are treated as exact zeros by the
/// spectral calculus. Without this a rank-deficient input carries rounding
/// eigenvalues near 1e-16 that small powers (`0.05`) blow up to order 0.1.
pub const NULL_REL: f64 = 1e-12;

/// A Hermitian matrix certified PSD, together with its (clamped) spectrum.
#[derive(Debug, Clone)]
pub struct PsdMatrix {
    base: HermitianMatrix,
    spectral: SpectralDecomposition,
    min_eig_certificate: f64,
}

impl PsdMatrix {
    pub fn new(base: HermitianMatrix) -> Result<Self> {
        let mut spectral = eigh(&base)?;
        let min_eig = spectral.min_eigenvalue();
        let norm = spectral.max_abs_eigenvalue();
        let tol = TOL_PSD * (1.0 + norm);
        if min_eig < -tol {
            return Err(HeinzError::NotPsd { min_eig, tol });
        }
        let top = spectral.eigenvalues.first().copied().unwrap_or(0.0).max(0.0);
        for l in spectral.eigenvalues.iter_mut() {
            if *l <= NULL_REL * top {
                *l = 0.0;
            }
        }
        Ok(Self {
            base,
            spectral,
            min_eig_certificate: min_eig,
        })
    }

    pub fn from_general(m: &GeneralMatrix) -> Result<Self> {
        Self::new(HermitianMatrix::new(m)?)
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::new(HermitianMatrix::from_real_rows(rows)?)
    }

    pub fn diag(values: &[f64]) -> Result<Self> {
        Self::new(HermitianMatrix::diag_real(values))
    }

    pub fn identity(n: usize) -> Self {
        Self::new(HermitianMatrix::identity(n)).expect("identity is PSD")
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn base(&self) -> &HermitianMatrix {
        &self.base
    }

    pub fn as_general(&self) -> &GeneralMatrix {
        self.base.as_general()
    }

    pub fn spectral(&self) -> &SpectralDecomposition {
        &self.spectral
    }

    /// Clamped eigenvalues, non-increasing.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.spectral.eigenvalues
    }

    /// Raw smallest eigenvalue found at construction, before clamping.
    pub fn min_eig_certificate(&self) -> f64 {
        self.min_eig_certificate
    }

    pub fn op_norm(&self) -> f64 {
        self.spectral.eigenvalues.first().copied().unwrap_or(0.0)
    }

    /// Number of eigenvalues above the null threshold.
    pub fn rank(&self) -> usize {
        self.spectral.eigenvalues.iter().filter(|&&l| l > 0.0).count()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.rank() == self.dim()
    }

    /// Spectral calculus `U g(Λ) U*`.
    pub fn apply(&self, g: impl Fn(f64) -> f64) -> HermitianMatrix {
        self.spectral.apply(g)
    }

    pub fn power(&self, p: f64) -> Result<HermitianMatrix> {
        matrix_power(self, p)
    }

    pub fn sqrt(&self) -> HermitianMatrix {
        self.spectral.apply(f64::sqrt)
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        Self::new(self.base.try_add(&rhs.base)?)
    }

    /// `factor * A` for `factor >= 0`.
    pub fn scale(&self, factor: f64) -> Result<Self> {
        check_range("scale factor", factor, 0.0, f64::MAX, "[0, inf)")?;
        Self::new(self.base.scale(factor))
    }
}

/// `A^p` for `p ∈ [-1, 2]` by spectral calculus.
///
/// Conventions: `A^0 = I` (so the Heinz mean endpoints are `(A+B)/2`),
/// `0^p = 0` for `p > 0`, and `A^1` returns the stored matrix unchanged.
pub fn matrix_power(a: &PsdMatrix, p: f64) -> Result<HermitianMatrix> {
    check_range("power", p, -1.0, 2.0, "[-1, 2]")?;
    if p == 0.0 {
        return Ok(HermitianMatrix::identity(a.dim()));
    }
    if p == 1.0 {
        return Ok(a.base.clone());
    }
    if p < 0.0 && !a.is_positive_definite() {
        return Err(HeinzError::SingularNegativePower {
            power: p,
            min_eig: a.min_eig_certificate,
        });
    }
    Ok(a.spectral.apply(|l| if l == 0.0 { 0.0 } else { l.powf(p) }))
}
