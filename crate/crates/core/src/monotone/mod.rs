//! Matrix monotone functions `f(t) = α + βt + ∫ λt/(t+λ) dμ(λ)` on `[0, ∞)`.
//!
//! Two evaluation routes are kept deliberately separate:
//!
//! * [`eval_spectral`] applies the scalar function to the eigenvalues;
//! * [`eval_integral`] sums resolvent terms `λ A (A + λI)^{-1}` obtained from
//!   LU solves, exactly for atomic measures and by quadrature for the power
//!   family, then cross-checks the result against the spectral route.
//!
//! The power family `t^r` (`0 < r < 1`) uses the density
//! `dμ(λ) = sin(rπ)/π · λ^{r-2} dλ`, i.e.
//! `t^r = sin(rπ)/π ∫_0^∞ λ^{r-1} t/(t+λ) dλ`.

pub mod checks;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{HeinzError, Result};
use crate::linalg::{lu, GeneralMatrix, HermitianMatrix, PsdMatrix};
use crate::quadrature::GaussLegendre;

pub use checks::{
    corollary1_check, monotonicity_check, proof_chain_check, theorem1_gap, ProofChainContext, ProofChainReport,
    Theorem1Gap,
};

/// Point mass of weight `weight` at `lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub lambda: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Measure {
    Atoms(Vec<Atom>),
    /// `t^r`, `r ∈ (0, 1)`.
    PowerFamily {
        r: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpecJson", into = "SpecJson")]
pub struct MonotoneFunctionSpec {
    alpha: f64,
    beta: f64,
    measure: Measure,
}

impl MonotoneFunctionSpec {
    pub fn new(alpha: f64, beta: f64, measure: Measure) -> Result<Self> {
        let bad = |m: String| Err(HeinzError::InvalidFunction(m));
        if !alpha.is_finite() {
            return bad(format!("alpha {alpha} not finite"));
        }
        if !(beta.is_finite() && beta >= 0.0) {
            return bad(format!("beta {beta} must be finite and non-negative"));
        }
        match &measure {
            Measure::Atoms(atoms) => {
                for a in atoms {
                    // An atom at λ = 0 contributes nothing to the matrix form and is rejected.
                    if !(a.lambda.is_finite() && a.lambda > 0.0) {
                        return bad(format!("atom location {} must be positive", a.lambda));
                    }
                    if !(a.weight.is_finite() && a.weight > 0.0) {
                        return bad(format!("atom weight {} must be positive", a.weight));
                    }
                }
            }
            Measure::PowerFamily { r } => {
                if !(*r > 0.0 && *r < 1.0) {
                    return bad(format!("power r = {r} outside (0, 1)"));
                }
            }
        }
        Ok(Self { alpha, beta, measure })
    }

    pub fn affine(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(alpha, beta, Measure::Atoms(Vec::new()))
    }

    pub fn power(r: f64) -> Result<Self> {
        Self::new(0.0, 0.0, Measure::PowerFamily { r })
    }

    pub fn atoms(alpha: f64, beta: f64, atoms: &[(f64, f64)]) -> Result<Self> {
        let atoms = atoms.iter().map(|&(lambda, weight)| Atom { lambda, weight }).collect();
        Self::new(alpha, beta, Measure::Atoms(atoms))
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn measure(&self) -> &Measure {
        &self.measure
    }

    /// Scalar `f(t)` for `t ≥ 0`.
    pub fn eval_scalar(&self, t: f64) -> f64 {
        let tail = match &self.measure {
            Measure::Atoms(atoms) => atoms.iter().map(|a| a.weight * a.lambda * t / (t + a.lambda)).sum(),
            Measure::PowerFamily { r } => {
                if t == 0.0 {
                    0.0
                } else {
                    t.powf(*r)
                }
            }
        };
        self.alpha + self.beta * t + tail
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
enum MeasureJson {
    Atoms { atoms: Vec<[f64; 2]> },
    Power { power_r: f64 },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecJson {
    alpha: f64,
    beta: f64,
    #[serde(default = "no_atoms")]
    measure: MeasureJson,
}

fn no_atoms() -> MeasureJson {
    MeasureJson::Atoms { atoms: Vec::new() }
}

impl TryFrom<SpecJson> for MonotoneFunctionSpec {
    type Error = HeinzError;

    fn try_from(j: SpecJson) -> Result<Self> {
        let measure = match j.measure {
            MeasureJson::Atoms { atoms } => Measure::Atoms(
                atoms
                    .into_iter()
                    .map(|[lambda, weight]| Atom { lambda, weight })
                    .collect(),
            ),
            MeasureJson::Power { power_r } => Measure::PowerFamily { r: power_r },
        };
        Self::new(j.alpha, j.beta, measure)
    }
}

impl From<MonotoneFunctionSpec> for SpecJson {
    fn from(s: MonotoneFunctionSpec) -> Self {
        let measure = match s.measure {
            Measure::Atoms(atoms) => MeasureJson::Atoms {
                atoms: atoms.iter().map(|a| [a.lambda, a.weight]).collect(),
            },
            Measure::PowerFamily { r } => MeasureJson::Power { power_r: r },
        };
        SpecJson {
            alpha: s.alpha,
            beta: s.beta,
            measure,
        }
    }
}

/// `f(A)` by spectral calculus.
pub fn eval_spectral(f: &MonotoneFunctionSpec, a: &PsdMatrix) -> HermitianMatrix {
    a.apply(|t| f.eval_scalar(t))
}

/// Truncation parameter: the middle quadrature panel covers
/// `[ε t_min, t_max / ε]` in `ln λ`; beyond it the tails are mapped to `[0, 1]`.
const TAIL_EPS: f64 = 1e-6;
const MID_NODES_MIN: usize = 200;
const MID_NODES_PER_UNIT: f64 = 5.0;
const TAIL_NODES: usize = 64;

/// `f(A)` assembled from resolvents, without the spectral cross-check.
pub fn integral_representation(f: &MonotoneFunctionSpec, a: &PsdMatrix) -> Result<HermitianMatrix> {
    let n = a.dim();
    let mut acc = GeneralMatrix::identity(n)
        .scale(f.alpha)
        .try_add(&a.as_general().scale(f.beta))?;
    match &f.measure {
        Measure::Atoms(atoms) => {
            for atom in atoms {
                let r = resolvent_ratio(a.as_general(), atom.lambda)?;
                acc = acc.try_add(&r.scale(atom.weight * atom.lambda))?;
            }
        }
        Measure::PowerFamily { r } => {
            acc = acc.try_add(&power_integral(a, *r)?)?;
        }
    }
    HermitianMatrix::new(&acc)
}

/// `f(A)` from the integral representation, rejected if it disagrees with the
/// spectral route by more than `quadrature_rel` in operator norm.
pub fn eval_integral(f: &MonotoneFunctionSpec, a: &PsdMatrix, quadrature_rel: f64) -> Result<HermitianMatrix> {
    let integral = integral_representation(f, a)?;
    let achieved = relative_disagreement(&integral, &eval_spectral(f, a))?;
    if achieved > quadrature_rel {
        return Err(HeinzError::Quadrature {
            achieved,
            tolerance: quadrature_rel,
        });
    }
    Ok(integral)
}

/// `‖X - Y‖ / ‖Y‖` in operator norm (absolute when `Y = 0`).
pub fn relative_disagreement(x: &HermitianMatrix, y: &HermitianMatrix) -> Result<f64> {
    let diff = crate::linalg::eigh::hermitian_op_norm(&x.try_sub(y)?)?;
    let base = crate::linalg::eigh::hermitian_op_norm(y)?;
    Ok(if base > 0.0 { diff / base } else { diff })
}

/// `A (A + λI)^{-1}`, computed as the solution of `(A + λI) X = A`.
fn resolvent_ratio(a: &GeneralMatrix, lambda: f64) -> Result<GeneralMatrix> {
    let mut shifted = a.clone();
    for i in 0..a.rows() {
        shifted[(i, i)].re += lambda;
    }
    lu::solve(&shifted, a)
}

/// `A (qA + c I)^{-1}`.
fn scaled_resolvent(a: &GeneralMatrix, q: f64, c: f64) -> Result<GeneralMatrix> {
    let mut shifted = a.scale(q);
    for i in 0..a.rows() {
        shifted[(i, i)].re += c;
    }
    lu::solve(&shifted, a)
}

/// `sin(rπ)/π ∫_0^∞ λ^{r-1} A(A+λI)^{-1} dλ`.
///
/// The support of `A` is taken from its spectral decomposition; on a singular
/// `A` the integral runs on the compression `Q* A Q` to the range, so that
/// rounding-level eigenvalues in the kernel are not raised to the power `r`.
fn power_integral(a: &PsdMatrix, r: f64) -> Result<GeneralMatrix> {
    let n = a.dim();
    let eig = a.eigenvalues();
    let positive: Vec<usize> = (0..n).filter(|&i| eig[i] > 0.0).collect();
    if positive.is_empty() {
        return Ok(GeneralMatrix::zeros(n, n));
    }
    let t_hi = eig[positive[0]];
    let t_lo = eig[*positive.last().unwrap()];

    let (work, lift) = if positive.len() == n {
        (a.as_general().clone(), None)
    } else {
        let basis = &a.spectral().basis;
        let q = GeneralMatrix::from_fn(n, positive.len(), |i, k| basis[(i, positive[k])]);
        let compressed = q.adjoint().matmul(a.as_general())?.matmul(&q)?;
        (HermitianMatrix::new(&compressed)?.into_general(), Some(q))
    };

    let lam_lo = TAIL_EPS * t_lo;
    let lam_hi = t_hi / TAIL_EPS;
    let (u_lo, u_hi) = (lam_lo.ln(), lam_hi.ln());
    let k = work.rows();
    let mut total = GeneralMatrix::zeros(k, k);

    // Middle: λ = e^u, λ^{r-1} dλ = e^{ru} du.
    let mid_nodes = MID_NODES_MIN.max((MID_NODES_PER_UNIT * (u_hi - u_lo)).ceil() as usize);
    let gl = GaussLegendre::new(mid_nodes);
    for (u, w) in gl.on_interval(u_lo, u_hi) {
        let lam = u.exp();
        let term = resolvent_ratio(&work, lam)?;
        total = total.try_add(&term.scale(w * (r * u).exp()))?;
    }

    // Lower tail [0, λ_lo]: λ = λ_lo v^{1/r}, λ^{r-1} dλ = (λ_lo^r / r) dv.
    let tails = GaussLegendre::new(TAIL_NODES);
    let lower_factor = lam_lo.powf(r) / r;
    for (v, w) in tails.on_interval(0.0, 1.0) {
        let term = resolvent_ratio(&work, lam_lo * v.powf(1.0 / r))?;
        total = total.try_add(&term.scale(w * lower_factor))?;
    }

    // Upper tail [λ_hi, ∞): λ = λ_hi w^{-1/(1-r)}, integrand becomes
    // λ_hi^r/(1-r) · A (w^{1/(1-r)} A + λ_hi I)^{-1}.
    let upper_factor = lam_hi.powf(r) / (1.0 - r);
    for (x, w) in tails.on_interval(0.0, 1.0) {
        let term = scaled_resolvent(&work, x.powf(1.0 / (1.0 - r)), lam_hi)?;
        total = total.try_add(&term.scale(w * upper_factor))?;
    }

    let total = total.scale((r * PI).sin() / PI);
    match lift {
        None => Ok(total),
        Some(q) => q.matmul(&total)?.matmul(&q.adjoint()),
    }
}
