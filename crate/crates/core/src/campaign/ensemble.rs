//! Seeded ensembles of PSD pairs and random monotone functions.
//!
//! Trial `i` of a campaign (counted across all dimensions) draws from its own
//! stream seeded with `seed ^ i`, so results do not depend on scheduling.

use rand::Rng;

use crate::error::Result;
use crate::linalg::random::{random_psd_with, rng_from_seed, SeededRng};
use crate::linalg::{Field, PsdMatrix};
use crate::monotone::MonotoneFunctionSpec;

/// Upper bound on the number of atoms in a random measure.
pub const MAX_ATOMS: usize = 8;

/// Full rank half of the time, otherwise uniform in `1..=dim`.
pub fn draw_rank<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> usize {
    if rng.random_bool(0.5) {
        dim
    } else {
        rng.random_range(1..=dim)
    }
}

/// One trial: a seeded PSD pair plus the stream for any further draws.
pub struct Trial {
    pub seed: u64,
    pub a: PsdMatrix,
    pub b: PsdMatrix,
    pub rng: SeededRng,
}

impl Trial {
    pub fn new(seed: u64, dim: usize, field: Field) -> Result<Self> {
        let mut rng = rng_from_seed(seed);
        let rank_a = draw_rank(&mut rng, dim);
        let rank_b = draw_rank(&mut rng, dim);
        let a = random_psd_with(&mut rng, dim, rank_a, 1.0, field)?;
        let b = random_psd_with(&mut rng, dim, rank_b, 1.0, field)?;
        Ok(Self { seed, a, b, rng })
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }
}

/// `(seed, dim)` for every trial of a campaign, in trial order.
pub fn trial_plan(seed: u64, dims: &[usize], trials: usize) -> Vec<(u64, usize)> {
    dims.iter()
        .enumerate()
        .flat_map(|(di, &dim)| (0..trials).map(move |t| (seed ^ (di * trials + t) as u64, dim)))
        .collect()
}

/// `α + βt + Σ w λt/(t+λ)` with 1 to [`MAX_ATOMS`] atoms spread over
/// `λ ∈ [1e-2, 1e2]`.
pub fn random_atom_spec<R: Rng + ?Sized>(rng: &mut R) -> Result<MonotoneFunctionSpec> {
    let count = rng.random_range(1..=MAX_ATOMS);
    let atoms: Vec<(f64, f64)> = (0..count)
        .map(|_| (10f64.powf(rng.random_range(-2.0..2.0)), rng.random_range(0.0..2.0)))
        .collect();
    let alpha = rng.random_range(-1.0..1.0);
    let beta = rng.random_range(0.0..1.0);
    MonotoneFunctionSpec::atoms(alpha, beta, &atoms)
}

pub fn random_affine_spec<R: Rng + ?Sized>(rng: &mut R) -> Result<MonotoneFunctionSpec> {
    MonotoneFunctionSpec::affine(rng.random_range(-1.0..1.0), rng.random_range(0.0..2.0))
}
