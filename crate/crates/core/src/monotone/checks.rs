//! Checkers for the monotone-function matrix inequality
//! `A f(A) + B f(B) ⪰ M^{1/2} (f(A) + f(B)) M^{1/2}`, `M = (A+B)/2`,
//! its eigenvalue corollary, and every intermediate step of its proof.

use serde::Serialize;

use super::{eval_spectral, MonotoneFunctionSpec};
use crate::error::{HeinzError, Result};
use crate::linalg::{eigvalsh, loewner_geq_abs, lu, GeneralMatrix, HermitianMatrix, PsdMatrix};
use crate::verdict::{CheckOutcome, IndexedVerdict, Tolerances};

fn same_dim(a: &PsdMatrix, b: &PsdMatrix, context: &'static str) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(HeinzError::DimensionMismatch {
            context,
            left: (a.dim(), a.dim()),
            right: (b.dim(), b.dim()),
        });
    }
    Ok(())
}

/// `1 + ‖A‖ + ‖B‖`.
pub fn pair_scale(a: &PsdMatrix, b: &PsdMatrix) -> f64 {
    1.0 + a.op_norm() + b.op_norm()
}

/// `(A + B)/2` as a PSD matrix.
pub fn midpoint(a: &PsdMatrix, b: &PsdMatrix) -> Result<PsdMatrix> {
    PsdMatrix::new(a.base().try_add(b.base())?.scale(0.5))
}

fn product(x: &HermitianMatrix, y: &HermitianMatrix) -> Result<GeneralMatrix> {
    x.as_general().matmul(y.as_general())
}

fn hermitian(m: &GeneralMatrix) -> Result<HermitianMatrix> {
    HermitianMatrix::new(m)
}

fn inverse(h: &HermitianMatrix) -> Result<HermitianMatrix> {
    hermitian(&lu::inverse(h.as_general())?)
}

/// Both sides of the matrix inequality and their difference.
#[derive(Debug, Clone)]
pub struct Theorem1Gap {
    pub lhs: HermitianMatrix,
    pub rhs: HermitianMatrix,
    pub gap: HermitianMatrix,
    pub verdict: CheckOutcome,
}

fn theorem1_sides(
    a: &PsdMatrix,
    b: &PsdMatrix,
    m_sqrt: &HermitianMatrix,
    f: &MonotoneFunctionSpec,
) -> Result<(HermitianMatrix, HermitianMatrix)> {
    let fa = eval_spectral(f, a);
    let fb = eval_spectral(f, b);
    let lhs = hermitian(&product(a.base(), &fa)?.try_add(&product(b.base(), &fb)?)?)?;
    let rhs = fa.try_add(&fb)?.congruence(m_sqrt.as_general())?;
    Ok((lhs, rhs))
}

/// `gap = A f(A) + B f(B) - M^{1/2}(f(A)+f(B))M^{1/2}`; holds iff
/// `λ_min(gap) ≥ -tol (1 + ‖A‖ + ‖B‖)`.
pub fn theorem1_gap(a: &PsdMatrix, b: &PsdMatrix, f: &MonotoneFunctionSpec, tol: &Tolerances) -> Result<Theorem1Gap> {
    same_dim(a, b, "theorem1_gap")?;
    let m = midpoint(a, b)?;
    theorem1_gap_with_midpoint(a, b, &m.sqrt(), f, tol)
}

/// Same as [`theorem1_gap`] with a precomputed `M^{1/2}`.
pub fn theorem1_gap_with_midpoint(
    a: &PsdMatrix,
    b: &PsdMatrix,
    m_sqrt: &HermitianMatrix,
    f: &MonotoneFunctionSpec,
    tol: &Tolerances,
) -> Result<Theorem1Gap> {
    let (lhs, rhs) = theorem1_sides(a, b, m_sqrt, f)?;
    let gap = lhs.try_sub(&rhs)?;
    let threshold = tol.loewner_rel * pair_scale(a, b);
    let v = loewner_geq_abs(&lhs, &rhs, threshold)?;
    let verdict = CheckOutcome::from_loewner("theorem1", &v, tol.loewner_rel);
    Ok(Theorem1Gap { lhs, rhs, gap, verdict })
}

/// `λ_j(A f(A) + B f(B)) ≥ λ_j(M^{1/2}(f(A)+f(B))M^{1/2})` for every `j`.
pub fn corollary1_check(
    a: &PsdMatrix,
    b: &PsdMatrix,
    f: &MonotoneFunctionSpec,
    tol: &Tolerances,
) -> Result<IndexedVerdict> {
    same_dim(a, b, "corollary1_check")?;
    let m = midpoint(a, b)?;
    corollary1_with_midpoint(a, b, &m.sqrt(), f, tol)
}

pub fn corollary1_with_midpoint(
    a: &PsdMatrix,
    b: &PsdMatrix,
    m_sqrt: &HermitianMatrix,
    f: &MonotoneFunctionSpec,
    tol: &Tolerances,
) -> Result<IndexedVerdict> {
    let (lhs, rhs) = theorem1_sides(a, b, m_sqrt, f)?;
    Ok(IndexedVerdict::geq(
        &eigvalsh(&lhs)?,
        &eigvalsh(&rhs)?,
        tol.loewner_rel,
        pair_scale(a, b),
    ))
}

/// `f(A) ⪰ f(B)`; meaningful when `A ⪰ B`.
pub fn monotonicity_check(
    a: &PsdMatrix,
    b: &PsdMatrix,
    f: &MonotoneFunctionSpec,
    tol: &Tolerances,
) -> Result<CheckOutcome> {
    same_dim(a, b, "monotonicity_check")?;
    let fa = eval_spectral(f, a);
    let fb = eval_spectral(f, b);
    let scale = 1.0 + crate::linalg::eigh::hermitian_op_norm(&fa)? + crate::linalg::eigh::hermitian_op_norm(&fb)?;
    let v = loewner_geq_abs(&fa, &fb, tol.loewner_rel * scale)?;
    Ok(CheckOutcome::from_loewner("monotonicity", &v, tol.loewner_rel))
}

/// The matrices `C_k = A^k (A+I)^{-1} + B^k (B+I)^{-1}` (k = 0, 1, 2) and
/// `M = (A+B)/2`.
#[derive(Debug, Clone)]
pub struct ProofChainContext {
    pub a: PsdMatrix,
    pub b: PsdMatrix,
    pub m: PsdMatrix,
    pub c: [HermitianMatrix; 3],
}

impl ProofChainContext {
    pub fn new(a: &PsdMatrix, b: &PsdMatrix) -> Result<Self> {
        same_dim(a, b, "proof_chain")?;
        let ra = inverse(&a.base().shift(1.0))?;
        let rb = inverse(&b.base().shift(1.0))?;
        let c0 = ra.try_add(&rb)?;
        let c1 = hermitian(&product(a.base(), &ra)?.try_add(&product(b.base(), &rb)?)?)?;
        let a2 = product(a.base(), a.base())?;
        let b2 = product(b.base(), b.base())?;
        let c2 = hermitian(&a2.matmul(ra.as_general())?.try_add(&b2.matmul(rb.as_general())?)?)?;
        Ok(Self {
            a: a.clone(),
            b: b.clone(),
            m: midpoint(a, b)?,
            c: [c0, c1, c2],
        })
    }
}

/// Step-by-step verdicts; step names are stable identifiers.
#[derive(Debug, Clone, Serialize)]
pub struct ProofChainReport {
    pub lambda: f64,
    pub steps: Vec<CheckOutcome>,
}

impl ProofChainReport {
    pub fn holds(&self) -> bool {
        self.steps.iter().all(|s| s.holds)
    }

    pub fn first_failure(&self) -> Option<&CheckOutcome> {
        self.steps.iter().find(|s| !s.holds)
    }

    pub fn step(&self, name: &str) -> Option<&CheckOutcome> {
        self.steps.iter().find(|s| s.name == name)
    }
}

/// `(α, β)` pairs used for the affine part of the chain.
pub const AFFINE_SAMPLES: [(f64, f64); 4] = [(-1.5, 0.0), (0.0, 1.0), (0.7, 2.5), (-0.3, 0.4)];

/// Minimum eigenvalue, relative to the norm, below which the inverse-based
/// step (h) is reported as not applicable.
pub const STEP_H_MIN_EIG_REL: f64 = 1e-8;

/// Verifies each step of the proof for the pair `(A, B)` at resolvent
/// parameter `λ`.
///
/// Steps (a)–(e) are evaluated on the rescaled pair `(A/λ, B/λ)`, which is how
/// the proof reaches the general resolvent; step (f) is the rescaled
/// inequality written for the original pair; (g) and (h) do not involve `λ`.
pub fn proof_chain_check(a: &PsdMatrix, b: &PsdMatrix, lambda: f64, tol: &Tolerances) -> Result<ProofChainReport> {
    same_dim(a, b, "proof_chain_check")?;
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(HeinzError::ParamOutOfRange {
            name: "lambda",
            value: lambda,
            range: "(0, inf)",
        });
    }
    let n = a.dim();
    let rel = tol.loewner_rel;
    let eq = tol.equality_abs;
    let id = HermitianMatrix::identity(n);
    let mut steps = Vec::new();

    let loewner = |name: &str, x: &HermitianMatrix, y: &HermitianMatrix, scale: f64| -> Result<CheckOutcome> {
        let v = loewner_geq_abs(x, y, rel * scale)?;
        Ok(CheckOutcome::from_loewner(name, &v, rel))
    };

    // (a)–(e) on the rescaled pair
    let sa = a.scale(1.0 / lambda)?;
    let sb = b.scale(1.0 / lambda)?;
    let ctx = ProofChainContext::new(&sa, &sb)?;
    let scaled = pair_scale(&sa, &sb);
    let [c0, c1, c2] = &ctx.c;
    let m_sqrt = ctx.m.sqrt();
    let m_sqrt_g = m_sqrt.as_general();
    let inv_i_plus_m = inverse(&ctx.m.base().shift(1.0))?;

    // (a) (A+I)^{-1} + (B+I)^{-1} ⪰ 2(I+M)^{-1}
    steps.push(loewner("a_resolvent_convexity", c0, &inv_i_plus_m.scale(2.0), scaled)?);

    // (b) C0 + √M C0 √M ⪰ 2I, and the commuting identity on the right
    let b_lhs = c0.try_add(&c0.congruence(m_sqrt_g)?)?;
    steps.push(loewner("b_c0_bound", &b_lhs, &id.scale(2.0), scaled)?);
    let b_rhs = inv_i_plus_m
        .scale(2.0)
        .try_add(&inv_i_plus_m.scale(2.0).congruence(m_sqrt_g)?)?;
    steps.push(CheckOutcome::equality(
        "b_commuting_identity",
        b_rhs.as_general(),
        id.scale(2.0).as_general(),
        eq,
    ));

    // (c) √M (2I - C1) √M ⪰ C1
    let c_lhs = id.scale(2.0).try_sub(c1)?.congruence(m_sqrt_g)?;
    steps.push(loewner("c_c1_bound", &c_lhs, c1, scaled)?);

    // (d) C2 ⪰ √M C1 √M
    steps.push(loewner("d_c2_bound", c2, &c1.congruence(m_sqrt_g)?, scaled)?);

    // (e) C_k + C_{k+1} = A^k + B^k for k = 0, 1
    steps.push(CheckOutcome::equality(
        "e_c0_plus_c1",
        c0.try_add(c1)?.as_general(),
        id.scale(2.0).as_general(),
        eq,
    ));
    steps.push(CheckOutcome::equality(
        "e_c1_plus_c2",
        c1.try_add(c2)?.as_general(),
        &sa.as_general().try_add(sb.as_general())?,
        eq,
    ));

    // (f) λA²(A+λ)^{-1} + λB²(B+λ)^{-1} ⪰ √M (λA(A+λ)^{-1} + λB(B+λ)^{-1}) √M
    let m = midpoint(a, b)?;
    let m_half = m.sqrt();
    let ra = lu::inverse(a.base().shift(lambda).as_general())?.scale(lambda);
    let rb = lu::inverse(b.base().shift(lambda).as_general())?.scale(lambda);
    let ag = a.as_general();
    let bg = b.as_general();
    let f_lhs = hermitian(&(&(&(ag * ag) * &ra) + &(&(bg * bg) * &rb)))?;
    let f_mid = hermitian(&(&(ag * &ra) + &(bg * &rb)))?;
    let f_rhs = f_mid.congruence(m_half.as_general())?;
    let orig = pair_scale(a, b);
    steps.push(loewner("f_scaled_resolvent", &f_lhs, &f_rhs, orig)?);

    // (g) A(αI + βA) + B(αI + βB) ⪰ √M (2αI + β(A+B)) √M; the α terms are an identity
    let sum = a.base().try_add(b.base())?;
    for (alpha, beta) in AFFINE_SAMPLES {
        let alpha_rhs = id.scale(2.0 * alpha).congruence(m_half.as_general())?;
        steps.push(CheckOutcome::equality(
            "g_alpha_identity",
            sum.scale(alpha).as_general(),
            alpha_rhs.as_general(),
            eq,
        ));
        let lhs = hermitian(&(&(&(ag * ag) + &(bg * bg)).scale(beta) + &sum.scale(alpha).into_general()))?;
        let rhs = id
            .scale(2.0 * alpha)
            .try_add(&sum.scale(beta))?
            .congruence(m_half.as_general())?;
        let scale = 1.0 + (1.0 + alpha.abs() + beta) * orig * orig;
        steps.push(loewner("g_affine", &lhs, &rhs, scale)?);
    }

    // (h) (A^{-1} + B^{-1})/2 ⪰ M^{-1}, only for definite pairs
    let definite = |p: &PsdMatrix| p.eigenvalues().last().copied().unwrap_or(0.0) > STEP_H_MIN_EIG_REL * p.op_norm();
    if definite(a) && definite(b) {
        let ai = inverse(a.base())?;
        let bi = inverse(b.base())?;
        let mi = inverse(m.base())?;
        let lhs = ai.try_add(&bi)?.scale(0.5);
        let norm = |h: &HermitianMatrix| crate::linalg::eigh::hermitian_op_norm(h);
        let scale = 1.0 + norm(&ai)? + norm(&bi)?;
        steps.push(loewner("h_inverse_convexity", &lhs, &mi, scale)?);
    } else {
        steps.push(CheckOutcome::not_applicable("h_inverse_convexity"));
    }

    Ok(ProofChainReport { lambda, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monotone::MonotoneFunctionSpec;

    #[test]
    fn equal_pair_has_zero_gap() {
        let a = PsdMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 3.0]]).unwrap();
        let f = MonotoneFunctionSpec::power(0.5).unwrap();
        let g = theorem1_gap(&a, &a, &f, &Tolerances::default()).unwrap();
        assert!(g.gap.as_general().max_abs() < 1e-12);
        assert!(g.verdict.holds);
    }

    #[test]
    fn identity_function_gives_square_convexity_gap() {
        let a = PsdMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 1.0]]).unwrap();
        let b = PsdMatrix::diag(&[0.5, 3.0]).unwrap();
        let f = MonotoneFunctionSpec::affine(0.0, 1.0).unwrap();
        let g = theorem1_gap(&a, &b, &f, &Tolerances::default()).unwrap();
        // A² + B² - 2M² = (A - B)²/2
        let d = a.as_general().try_sub(b.as_general()).unwrap();
        let want = (&d * &d).scale(0.5);
        assert!(g.gap.as_general().max_abs_diff(&want) < 1e-12);
        assert!(g.verdict.holds);
    }

    #[test]
    fn corollary_on_identities() {
        let i = PsdMatrix::identity(3);
        let f = MonotoneFunctionSpec::affine(0.0, 1.0).unwrap();
        let v = corollary1_check(&i, &i, &f, &Tolerances::default()).unwrap();
        for c in &v.comparisons {
            assert!((c.lhs - 2.0).abs() < 1e-14 && (c.rhs - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn proof_chain_on_equal_pair_is_tight() {
        let a = PsdMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 3.0]]).unwrap();
        let r = proof_chain_check(&a, &a, 1.0, &Tolerances::default()).unwrap();
        assert!(r.holds(), "{:?}", r.first_failure());
        for name in ["a_resolvent_convexity", "b_c0_bound", "c_c1_bound", "d_c2_bound"] {
            assert!(r.step(name).unwrap().slack.abs() < 1e-12, "{name}");
        }
    }

    #[test]
    fn step_h_skipped_for_singular_input() {
        let a = PsdMatrix::diag(&[1.0, 0.0]).unwrap();
        let b = PsdMatrix::diag(&[2.0, 1.0]).unwrap();
        let r = proof_chain_check(&a, &b, 1.0, &Tolerances::default()).unwrap();
        assert!(!r.step("h_inverse_convexity").unwrap().applicable);
        assert!(r.holds());
    }

    #[test]
    fn rejects_bad_lambda() {
        let a = PsdMatrix::identity(2);
        assert!(proof_chain_check(&a, &a, 0.0, &Tolerances::default()).is_err());
        assert!(proof_chain_check(&a, &a, -1.0, &Tolerances::default()).is_err());
    }
}
