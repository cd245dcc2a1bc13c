//! Seeded random matrices: Wishart-style PSD matrices of prescribed rank and
//! Haar-like unitaries.
//!
//! All draws come from `ChaCha8Rng`, so a given seed reproduces the same
//! matrix bit-for-bit on every platform.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::matrix::{GeneralMatrix, HermitianMatrix};
use super::psd::PsdMatrix;
use crate::error::{HeinzError, Result};

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entry field of the Gaussian factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    #[default]
    Complex,
    Real,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomPsdConfig {
    pub dim: usize,
    pub rank: usize,
    pub scale: f64,
    pub seed: u64,
    #[serde(default)]
    pub field: Field,
}

impl RandomPsdConfig {
    pub fn new(dim: usize, rank: usize, seed: u64) -> Self {
        Self {
            dim,
            rank,
            scale: 1.0,
            seed,
            field: Field::Complex,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(HeinzError::Config("dim must be positive".into()));
        }
        if self.rank == 0 || self.rank > self.dim {
            return Err(HeinzError::Config(format!(
                "rank {} outside [1, {}]",
                self.rank, self.dim
            )));
        }
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(HeinzError::Config(format!("scale {} must be positive", self.scale)));
        }
        Ok(())
    }
}

/// i.i.d. standard Gaussian entries; complex entries have `E|z|^2 = 1`.
pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, field: Field) -> GeneralMatrix {
    let half = std::f64::consts::FRAC_1_SQRT_2;
    GeneralMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        match field {
            Field::Real => C64::new(re, 0.0),
            Field::Complex => {
                let im: f64 = rng.sample(StandardNormal);
                C64::new(re * half, im * half)
            }
        }
    })
}

/// `scale * G G*` with `G` of shape `dim x rank`.
pub fn random_psd_with<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    rank: usize,
    scale: f64,
    field: Field,
) -> Result<PsdMatrix> {
    let g = gaussian_matrix(rng, dim, rank, field);
    let gram = g.matmul(&g.adjoint())?.scale(scale);
    PsdMatrix::new(HermitianMatrix::new(&gram)?)
}

pub fn random_psd(cfg: &RandomPsdConfig) -> Result<PsdMatrix> {
    cfg.validate()?;
    let mut rng = rng_from_seed(cfg.seed);
    random_psd_with(&mut rng, cfg.dim, cfg.rank, cfg.scale, cfg.field)
}

/// Unitary from modified Gram–Schmidt on a Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize, field: Field) -> GeneralMatrix {
    loop {
        let g = gaussian_matrix(rng, n, n, field);
        let mut cols: Vec<Vec<C64>> = (0..n).map(|j| g.column(j)).collect();
        let mut ok = true;
        for j in 0..n {
            for k in 0..j {
                let proj: C64 = cols[k].iter().zip(&cols[j]).map(|(a, b)| a.conj() * b).sum();
                let (done, rest) = cols.split_at_mut(j);
                for (x, y) in rest[0].iter_mut().zip(&done[k]) {
                    *x -= proj * y;
                }
            }
            let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-8 {
                ok = false;
                break;
            }
            cols[j].iter_mut().for_each(|z| *z /= norm);
        }
        if ok {
            return GeneralMatrix::from_fn(n, n, |i, j| cols[j][i]);
        }
    }
}

/// `U diag(spectrum) U*` with a random unitary `U`.
pub fn psd_with_spectrum<R: Rng + ?Sized>(rng: &mut R, spectrum: &[f64], field: Field) -> Result<PsdMatrix> {
    let u = random_unitary(rng, spectrum.len(), field);
    let d = GeneralMatrix::diag_real(spectrum);
    let m = u.matmul(&d)?.matmul(&u.adjoint())?;
    PsdMatrix::from_general(&m)
}
