//! The 3x3 rank-2 pair for which `σ_2(A^{1/2}B^{1/2}) > σ_2(H_ν(A, B))` on a
//! window of small `ν`, and the bisection for the window's edge.

use log::debug;
use serde::{Deserialize, Serialize};

use crate::error::{HeinzError, Result};
use crate::linalg::{singular_values, PsdMatrix};
use crate::means::{geometric_three, heinz_matrix};

/// Default bisection bracket.
pub const BRACKET: (f64, f64) = (0.01, 0.5);
/// Fallback bracket when [`BRACKET`] shows no sign change.
pub const WIDE_BRACKET: (f64, f64) = (1e-4, 0.5 - 1e-4);
pub const BISECTION_TOL: f64 = 1e-6;

pub fn reference_pair() -> (PsdMatrix, PsdMatrix) {
    let a = PsdMatrix::from_real_rows(&[&[2.0, 4.0, 2.0], &[4.0, 8.0, 4.0], &[2.0, 4.0, 4.0]])
        .expect("constant matrix is PSD");
    let b = PsdMatrix::from_real_rows(&[&[5.0, 0.0, 4.0], &[0.0, 0.0, 0.0], &[4.0, 0.0, 4.0]])
        .expect("constant matrix is PSD");
    (a, b)
}

/// Sorted, duplicate-free points in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct NuGrid {
    points: Vec<f64>,
}

impl NuGrid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(HeinzError::Config("grid points must lie in [0, 1]".into()));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(HeinzError::Config("grid points must be strictly increasing".into()));
        }
        Ok(Self { points })
    }

    /// `n` equally spaced points including both endpoints.
    pub fn uniform(n: usize) -> Result<Self> {
        match n {
            0 => Self::new(Vec::new()),
            1 => Self::new(vec![0.5]),
            _ => Self::new((0..n).map(|i| i as f64 / (n - 1) as f64).collect()),
        }
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

impl TryFrom<Vec<f64>> for NuGrid {
    type Error = HeinzError;

    fn try_from(points: Vec<f64>) -> Result<Self> {
        Self::new(points)
    }
}

impl From<NuGrid> for Vec<f64> {
    fn from(g: NuGrid) -> Self {
        g.points
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub nu: f64,
    pub sigma_j_heinz: f64,
    pub sigma_j_geom: f64,
    pub g: f64,
}

pub const SCAN_CSV_HEADER: &str = "nu,sigma_j_heinz,sigma_j_geom,g";

impl ScanRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{:.16e},{:.16e},{:.16e},{:.16e}",
            self.nu, self.sigma_j_heinz, self.sigma_j_geom, self.g
        )
    }
}

/// `g(ν) = σ_j(H_ν(A,B)) − σ_j(A^{1/2}B^{1/2})`, with the geometric side
/// computed once.
#[derive(Debug, Clone)]
pub struct GapFunction<'a> {
    a: &'a PsdMatrix,
    b: &'a PsdMatrix,
    j: usize,
    sigma_geom: f64,
}

impl<'a> GapFunction<'a> {
    pub fn new(a: &'a PsdMatrix, b: &'a PsdMatrix, j: usize) -> Result<Self> {
        let geom = singular_values(&geometric_three(
            a,
            &crate::linalg::GeneralMatrix::identity(a.dim()),
            b,
        )?)?;
        if j == 0 || j > geom.len() {
            return Err(HeinzError::KyFanIndex { k: j, max: geom.len() });
        }
        Ok(Self {
            a,
            b,
            j,
            sigma_geom: geom.sigma(j),
        })
    }

    pub fn sigma_geom(&self) -> f64 {
        self.sigma_geom
    }

    pub fn row(&self, nu: f64) -> Result<ScanRow> {
        let sigma_j_heinz = singular_values(&heinz_matrix(self.a, self.b, nu)?)?.sigma(self.j);
        Ok(ScanRow {
            nu,
            sigma_j_heinz,
            sigma_j_geom: self.sigma_geom,
            g: sigma_j_heinz - self.sigma_geom,
        })
    }

    pub fn eval(&self, nu: f64) -> Result<f64> {
        Ok(self.row(nu)?.g)
    }

    /// Root of `g` in `(lo, hi)` by bisection to `tol`; `g(lo) < 0 < g(hi)`
    /// is required.
    pub fn bisect(&self, lo: f64, hi: f64, tol: f64) -> Result<f64> {
        let (g_lo, g_hi) = (self.eval(lo)?, self.eval(hi)?);
        if !(g_lo < 0.0 && g_hi > 0.0) {
            return Err(HeinzError::Bracket { lo, hi, g_lo, g_hi });
        }
        let (mut lo, mut hi) = (lo, hi);
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if self.eval(mid)? < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Bisection on [`BRACKET`], widened once to [`WIDE_BRACKET`].
    pub fn threshold(&self) -> Result<f64> {
        match self.bisect(BRACKET.0, BRACKET.1, BISECTION_TOL) {
            Err(HeinzError::Bracket { g_lo, g_hi, .. }) => {
                debug!("bracket {BRACKET:?} gave g = ({g_lo:e}, {g_hi:e}); widening to {WIDE_BRACKET:?}");
                self.bisect(WIDE_BRACKET.0, WIDE_BRACKET.1, BISECTION_TOL)
            }
            other => other,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CounterexampleReport {
    pub j: usize,
    pub sigma_geom: f64,
    pub scan: Vec<ScanRow>,
    pub threshold: f64,
}

impl CounterexampleReport {
    pub fn write_csv(&self, out: &mut impl std::io::Write) -> std::io::Result<()> {
        writeln!(out, "{SCAN_CSV_HEADER}")?;
        for row in &self.scan {
            writeln!(out, "{}", row.to_csv())?;
        }
        writeln!(out, "threshold,{:.16e}", self.threshold)
    }
}

/// Scans `g` (with `j = 2`) over `grid` for the built-in pair and locates the
/// edge of the violation window.
pub fn reference_counterexample(grid: &NuGrid) -> Result<CounterexampleReport> {
    let (a, b) = reference_pair();
    let gap = GapFunction::new(&a, &b, 2)?;
    let scan = grid
        .points()
        .iter()
        .map(|&nu| gap.row(nu))
        .collect::<Result<Vec<_>>>()?;
    let threshold = gap.threshold()?;
    Ok(CounterexampleReport {
        j: 2,
        sigma_geom: gap.sigma_geom(),
        scan,
        threshold,
    })
}
