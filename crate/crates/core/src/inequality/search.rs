//! Randomized search for pairs with `σ_j(A^{1/2}B^{1/2}) > σ_j(H_ν(A, B))`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::counterexample::{reference_pair, NuGrid};
use crate::error::{HeinzError, Result};
use crate::linalg::random::{random_psd_with, rng_from_seed};
use crate::linalg::{singular_values, GeneralMatrix, PsdMatrix, RandomPsdConfig};
use crate::means::{geometric_three, heinz_matrix};
use crate::monotone::checks::pair_scale;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Template for both matrices; trial `t` uses seed `ensemble.seed ^ t`.
    pub ensemble: RandomPsdConfig,
    pub nu_grid: NuGrid,
    /// Largest index scanned; `None` scans every index.
    pub j_max: Option<usize>,
    pub trials: usize,
    pub refine_steps: usize,
    /// Replace trial 0 with the built-in 3x3 pair.
    pub inject_reference: bool,
    /// A hit is recorded when its margin exceeds `10 * tol_rel * (1 + ‖A‖ + ‖B‖)`.
    pub tol_rel: f64,
}

impl SearchConfig {
    pub fn new(ensemble: RandomPsdConfig, nu_grid: NuGrid, trials: usize) -> Self {
        Self {
            ensemble,
            nu_grid,
            j_max: None,
            trials,
            refine_steps: 30,
            inject_reference: false,
            tol_rel: 1e-9,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.ensemble.validate()?;
        if self.j_max == Some(0) {
            return Err(HeinzError::Config("j_max must be positive".into()));
        }
        if !(self.tol_rel.is_finite() && self.tol_rel >= 0.0) {
            return Err(HeinzError::Config(format!(
                "tolerance {} must be non-negative",
                self.tol_rel
            )));
        }
        Ok(())
    }

    fn trial_seed(&self, trial: usize) -> u64 {
        self.ensemble.seed ^ trial as u64
    }

    fn is_injected(&self, seed: u64) -> bool {
        self.inject_reference && seed == self.ensemble.seed
    }

    /// The pair sampled for a trial seed.
    pub fn pair(&self, seed: u64) -> Result<(PsdMatrix, PsdMatrix)> {
        if self.is_injected(seed) {
            return Ok(reference_pair());
        }
        let e = &self.ensemble;
        let mut rng = rng_from_seed(seed);
        let a = random_psd_with(&mut rng, e.dim, e.rank, e.scale, e.field)?;
        let b = random_psd_with(&mut rng, e.dim, e.rank, e.scale, e.field)?;
        Ok((a, b))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ViolationRecord {
    pub seed: u64,
    pub dim: usize,
    pub rank_a: usize,
    pub rank_b: usize,
    pub nu: f64,
    pub j: usize,
    /// `σ_j(A^{1/2}B^{1/2})`.
    pub lhs: f64,
    /// `σ_j(H_ν(A, B))`.
    pub rhs: f64,
    pub margin: f64,
}

pub const VIOLATION_CSV_HEADER: &str = "seed,dim,rank_a,rank_b,nu,j,lhs,rhs,margin";

impl ViolationRecord {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{:.16e},{},{:.16e},{:.16e},{:.16e}",
            self.seed, self.dim, self.rank_a, self.rank_b, self.nu, self.j, self.lhs, self.rhs, self.margin
        )
    }

    pub fn from_csv(line: &str) -> Result<Self> {
        let fields: Vec<&str> = line.trim_end().split(',').collect();
        if fields.len() != 9 {
            return Err(HeinzError::Schema(format!("expected 9 columns, got {}", fields.len())));
        }
        fn int<T: std::str::FromStr>(s: &str) -> Result<T> {
            s.parse().map_err(|_| HeinzError::Schema(format!("bad integer {s:?}")))
        }
        fn real(s: &str) -> Result<f64> {
            s.parse().map_err(|_| HeinzError::Schema(format!("bad number {s:?}")))
        }
        Ok(Self {
            seed: int(fields[0])?,
            dim: int(fields[1])?,
            rank_a: int(fields[2])?,
            rank_b: int(fields[3])?,
            nu: real(fields[4])?,
            j: int(fields[5])?,
            lhs: real(fields[6])?,
            rhs: real(fields[7])?,
            margin: real(fields[8])?,
        })
    }
}

pub fn write_violations_csv(records: &[ViolationRecord], out: &mut impl std::io::Write) -> std::io::Result<()> {
    writeln!(out, "{VIOLATION_CSV_HEADER}")?;
    for r in records {
        writeln!(out, "{}", r.to_csv())?;
    }
    Ok(())
}

pub fn parse_violations_csv(text: &str) -> Result<Vec<ViolationRecord>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim_end() == VIOLATION_CSV_HEADER => {}
        other => return Err(HeinzError::Schema(format!("unexpected header {other:?}"))),
    }
    lines
        .filter(|l| !l.trim().is_empty())
        .map(ViolationRecord::from_csv)
        .collect()
}

/// Margin evaluator for one pair.
struct Trial {
    a: PsdMatrix,
    b: PsdMatrix,
    geom: Vec<f64>,
}

impl Trial {
    fn new(a: PsdMatrix, b: PsdMatrix) -> Result<Self> {
        let geom = singular_values(&geometric_three(&a, &GeneralMatrix::identity(a.dim()), &b)?)?.values;
        Ok(Self { a, b, geom })
    }

    fn heinz_sigma(&self, nu: f64) -> Result<Vec<f64>> {
        Ok(singular_values(&heinz_matrix(&self.a, &self.b, nu)?)?.values)
    }

    fn margin(&self, nu: f64, j: usize) -> Result<(f64, f64)> {
        let rhs = self.heinz_sigma(nu)?[j - 1];
        Ok((self.geom[j - 1] - rhs, rhs))
    }

    /// Golden-section maximization of the margin over `[lo, hi]`, never
    /// returning a point worse than `start`.
    fn refine(&self, j: usize, lo: f64, hi: f64, start: (f64, f64), steps: usize) -> Result<(f64, f64)> {
        const INV_PHI: f64 = 0.618_033_988_749_894_9;
        let mut best = start;
        let (mut lo, mut hi) = (lo, hi);
        let mut x1 = hi - INV_PHI * (hi - lo);
        let mut x2 = lo + INV_PHI * (hi - lo);
        let mut f1 = self.margin(x1, j)?.0;
        let mut f2 = self.margin(x2, j)?.0;
        for _ in 0..steps {
            if f1 > best.1 {
                best = (x1, f1);
            }
            if f2 > best.1 {
                best = (x2, f2);
            }
            if f1 >= f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - INV_PHI * (hi - lo);
                f1 = self.margin(x1, j)?.0;
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + INV_PHI * (hi - lo);
                f2 = self.margin(x2, j)?.0;
            }
        }
        for (x, f) in [(x1, f1), (x2, f2)] {
            if f > best.1 {
                best = (x, f);
            }
        }
        Ok(best)
    }
}

fn search_trial(cfg: &SearchConfig, seed: u64) -> Result<Vec<ViolationRecord>> {
    let (a, b) = cfg.pair(seed)?;
    let threshold = 10.0 * cfg.tol_rel * pair_scale(&a, &b);
    let (dim, rank_a, rank_b) = (a.dim(), a.rank(), b.rank());
    let trial = Trial::new(a, b)?;
    let j_max = cfg.j_max.unwrap_or(dim).min(dim);
    let points = cfg.nu_grid.points();
    let sigmas = points
        .iter()
        .map(|&nu| trial.heinz_sigma(nu))
        .collect::<Result<Vec<_>>>()?;

    let mut records = Vec::new();
    for j in 1..=j_max {
        let best = (0..points.len())
            .map(|i| (i, trial.geom[j - 1] - sigmas[i][j - 1]))
            .filter(|&(_, m)| m > 0.0)
            .max_by(|x, y| x.1.total_cmp(&y.1));
        let Some((i, grid_margin)) = best else { continue };
        let lo = if i > 0 { points[i - 1] } else { points[i] };
        let hi = if i + 1 < points.len() { points[i + 1] } else { points[i] };
        let (nu, _) = if hi > lo {
            trial.refine(j, lo, hi, (points[i], grid_margin), cfg.refine_steps)?
        } else {
            (points[i], grid_margin)
        };
        let (margin, rhs) = trial.margin(nu, j)?;
        if margin > threshold {
            records.push(ViolationRecord {
                seed,
                dim,
                rank_a,
                rank_b,
                nu,
                j,
                lhs: trial.geom[j - 1],
                rhs,
                margin,
            });
        }
    }
    Ok(records)
}

/// Runs `cfg.trials` independent trials in parallel; the result depends only
/// on `cfg`. Records are sorted by margin, descending.
pub fn violation_search(cfg: &SearchConfig) -> Result<Vec<ViolationRecord>> {
    cfg.validate()?;
    let per_trial = (0..cfg.trials)
        .into_par_iter()
        .map(|t| search_trial(cfg, cfg.trial_seed(t)))
        .collect::<Result<Vec<_>>>()?;
    let mut records: Vec<ViolationRecord> = per_trial.into_iter().flatten().collect();
    records.sort_by(|x, y| {
        y.margin
            .total_cmp(&x.margin)
            .then(x.seed.cmp(&y.seed))
            .then(x.j.cmp(&y.j))
            .then(x.nu.total_cmp(&y.nu))
    });
    Ok(records)
}

/// Recomputes a record's sides from its seed under `cfg`.
pub fn reevaluate(cfg: &SearchConfig, record: &ViolationRecord) -> Result<ViolationRecord> {
    let (a, b) = cfg.pair(record.seed)?;
    if record.j == 0 || record.j > a.dim() {
        return Err(HeinzError::KyFanIndex {
            k: record.j,
            max: a.dim(),
        });
    }
    let (rank_a, rank_b) = (a.rank(), b.rank());
    let trial = Trial::new(a, b)?;
    let (margin, rhs) = trial.margin(record.nu, record.j)?;
    Ok(ViolationRecord {
        rank_a,
        rank_b,
        lhs: trial.geom[record.j - 1],
        rhs,
        margin,
        ..*record
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(trials: usize) -> SearchConfig {
        SearchConfig::new(RandomPsdConfig::new(3, 2, 5), NuGrid::uniform(11).unwrap(), trials)
    }

    #[test]
    fn zero_trials_is_empty() {
        assert!(violation_search(&cfg(0)).unwrap().is_empty());
    }

    #[test]
    fn injected_pair_is_found() {
        let mut c = cfg(1);
        c.nu_grid = NuGrid::uniform(21).unwrap();
        c.inject_reference = true;
        let records = violation_search(&c).unwrap();
        assert!(records.iter().any(|r| r.j == 2 && r.nu < 0.13));
    }

    #[test]
    fn csv_round_trip() {
        let r = ViolationRecord {
            seed: 17,
            dim: 3,
            rank_a: 2,
            rank_b: 2,
            nu: 0.1 + 0.2,
            j: 2,
            lhs: std::f64::consts::PI,
            rhs: 1.0 / 3.0,
            margin: std::f64::consts::PI - 1.0 / 3.0,
        };
        let line = r.to_csv();
        let back = ViolationRecord::from_csv(&line).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_csv(), line);
        assert!(ViolationRecord::from_csv("1,2,3").is_err());
    }
}
