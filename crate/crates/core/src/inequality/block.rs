//! PSD block matrices `Z = [[M, K], [K*, N]]`, the off-diagonal singular value
//! bound `σ_j(K) ≤ λ_j(Z)/2`, and the block constructions used to derive the
//! Heinz-mean inequality from the monotone-function corollary.

use serde::{Deserialize, Serialize};

use crate::error::{check_range, HeinzError, Result};
use crate::linalg::{eigvalsh, product_eigenvalues, singular_values, GeneralMatrix, HermitianMatrix, PsdMatrix};
use crate::verdict::{CheckOutcome, IndexedVerdict, Tolerances};

#[derive(Debug, Clone)]
pub struct BlockPsd {
    z: PsdMatrix,
    m: usize,
    n: usize,
}

impl BlockPsd {
    pub fn new(z: PsdMatrix, m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 || m + n != z.dim() {
            return Err(HeinzError::DimensionMismatch {
                context: "block split",
                left: (m, n),
                right: (z.dim(), z.dim()),
            });
        }
        Ok(Self { z, m, n })
    }

    /// Gram matrix `G G*` of a `(m+n) x k` factor.
    pub fn from_factor(g: &GeneralMatrix, m: usize) -> Result<Self> {
        let z = PsdMatrix::from_general(&g.matmul(&g.adjoint())?)?;
        let n = g.rows().saturating_sub(m);
        Self::new(z, m, n)
    }

    pub fn z(&self) -> &PsdMatrix {
        &self.z
    }

    pub fn split(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn upper_left(&self) -> GeneralMatrix {
        self.z.as_general().block(0, 0, self.m, self.m)
    }

    pub fn lower_right(&self) -> GeneralMatrix {
        self.z.as_general().block(self.m, self.m, self.n, self.n)
    }

    /// The `m x n` block `K`.
    pub fn off_diagonal(&self) -> GeneralMatrix {
        self.z.as_general().block(0, self.m, self.m, self.n)
    }
}

/// `σ_j(K) ≤ λ_j(Z)/2` for `j ≤ min(m, n)`; scale `1 + λ_1(Z)`.
pub fn tao_check(z: &BlockPsd, tol: &Tolerances) -> Result<IndexedVerdict> {
    let k = singular_values(&z.off_diagonal())?;
    let half: Vec<f64> = z.z.eigenvalues().iter().map(|l| 0.5 * l).collect();
    let count = z.m.min(z.n);
    Ok(IndexedVerdict::leq(
        &k.values[..count],
        &half[..count],
        tol.loewner_rel,
        1.0 + z.z.op_norm(),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockVariant {
    /// `V = [A^{r/2}; B^{r/2}]`, `W = A + B`.
    PowerOutside,
    /// `V = [A^{1/2}; B^{1/2}]`, `W = A^r + B^r`.
    PowerInside,
}

#[derive(Debug, Clone)]
pub struct BlockForm {
    pub block: BlockPsd,
    pub variant: BlockVariant,
    /// The stacked factor `V` (`2n x n`).
    pub v: GeneralMatrix,
    pub w: PsdMatrix,
    /// `λ_j(Z)` for `j ≤ n` against `λ_j(W V*V)`.
    pub spectrum_check: CheckOutcome,
}

/// `Z = V W V*` for the chosen variant.
pub fn block_form(a: &PsdMatrix, b: &PsdMatrix, r: f64, variant: BlockVariant, tol: &Tolerances) -> Result<BlockForm> {
    check_range("r", r, 0.0, 1.0, "[0, 1]")?;
    if a.dim() != b.dim() {
        return Err(HeinzError::DimensionMismatch {
            context: "block_form",
            left: (a.dim(), a.dim()),
            right: (b.dim(), b.dim()),
        });
    }
    let n = a.dim();
    let (top, bottom, w) = match variant {
        BlockVariant::PowerOutside => (a.power(r / 2.0)?, b.power(r / 2.0)?, a.try_add(b)?),
        BlockVariant::PowerInside => {
            let w = PsdMatrix::new(a.power(r)?.try_add(&b.power(r)?)?)?;
            (a.sqrt(), b.sqrt(), w)
        }
    };
    let v = GeneralMatrix::vstack(top.as_general(), bottom.as_general())?;
    let z = PsdMatrix::new(w.base().congruence(&v)?)?;
    let block = BlockPsd::new(z, n, n)?;

    let gram = PsdMatrix::new(HermitianMatrix::new(&v.adjoint().matmul(&v)?)?)?;
    let product = product_eigenvalues(&w, &gram)?;
    let spectrum_check =
        CheckOutcome::vector_equality("block_spectrum", &block.z.eigenvalues()[..n], &product, tol.loewner_rel);
    Ok(BlockForm {
        block,
        variant,
        v,
        w,
        spectrum_check,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `s = (1 + r/2)/(1 + r)`, covering `[3/4, 1]`.
    Outer,
    /// `s = (r + 1/2)/(1 + r)`, covering `[1/2, 3/4]`.
    Inner,
}

impl Branch {
    pub fn variant(self) -> BlockVariant {
        match self {
            Branch::Outer => BlockVariant::PowerOutside,
            Branch::Inner => BlockVariant::PowerInside,
        }
    }
}

pub fn s_from_r(r: f64, branch: Branch) -> Result<f64> {
    check_range("r", r, 0.0, 1.0, "[0, 1]")?;
    Ok(match branch {
        Branch::Outer => (1.0 + r / 2.0) / (1.0 + r),
        Branch::Inner => (r + 0.5) / (1.0 + r),
    })
}

/// Values at the end of one branch of the chain:
/// `σ_j(K)` against `λ_j(A^{r+1} + B^{r+1})`.
#[derive(Debug, Clone)]
pub struct ChainEnd {
    pub sigma: Vec<f64>,
    pub lambda: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct Theorem2Steps {
    pub r: f64,
    pub steps: Vec<CheckOutcome>,
    pub outer: ChainEnd,
    pub inner: ChainEnd,
}

impl Theorem2Steps {
    pub fn holds(&self) -> bool {
        self.steps.iter().all(|s| s.holds)
    }

    pub fn end(&self, branch: Branch) -> &ChainEnd {
        match branch {
            Branch::Outer => &self.outer,
            Branch::Inner => &self.inner,
        }
    }
}

/// Verifies the chain
/// `λ_j(A^{r+1}+B^{r+1}) ≥ ½λ_j((A+B)(A^r+B^r)) = ½λ_j(Z) ≥ σ_j(K)` for both
/// block variants, together with the identities linking `K` to the Heinz-type
/// sum.
pub fn theorem2_steps(a: &PsdMatrix, b: &PsdMatrix, r: f64, tol: &Tolerances) -> Result<Theorem2Steps> {
    check_range("r", r, 0.0, 1.0, "[0, 1]")?;
    let rel = tol.loewner_rel;
    let top = a.power(r + 1.0)?.try_add(&b.power(r + 1.0)?)?;
    let top_eigs = eigvalsh(&top)?;
    let scale = 1.0 + top_eigs.first().copied().unwrap_or(0.0).max(0.0) + a.op_norm() + b.op_norm();

    let sum = a.try_add(b)?;
    let powers = PsdMatrix::new(a.power(r)?.try_add(&b.power(r)?)?)?;
    let half_product: Vec<f64> = product_eigenvalues(&sum, &powers)?.iter().map(|l| 0.5 * l).collect();

    let mut steps = vec![IndexedVerdict::geq(&top_eigs, &half_product, rel, scale).outcome("i_corollary_power")];

    let mut ends = Vec::with_capacity(2);
    for (variant, tag) in [
        (BlockVariant::PowerOutside, "outer"),
        (BlockVariant::PowerInside, "inner"),
    ] {
        let form = block_form(a, b, r, variant, tol)?;
        steps.push(CheckOutcome {
            name: format!("block_spectrum_{tag}"),
            ..form.spectrum_check.clone()
        });
        steps.push(tao_check(&form.block, tol)?.outcome(format!("ii_tao_{tag}")));

        let k = form.block.off_diagonal();
        let (p_hi, p_lo) = match variant {
            BlockVariant::PowerOutside => (1.0 + r / 2.0, r / 2.0),
            BlockVariant::PowerInside => (0.5 + r, 0.5),
        };
        let expanded = a
            .power(p_hi)?
            .as_general()
            .matmul(b.power(p_lo)?.as_general())?
            .try_add(&a.power(p_lo)?.as_general().matmul(b.power(p_hi)?.as_general())?)?;
        steps.push(CheckOutcome::equality(
            format!("iii_identity_{tag}"),
            &k,
            &expanded,
            tol.equality_abs.max(1e-12),
        ));
        let sigma = singular_values(&expanded)?.values;
        steps.push(IndexedVerdict::leq(&sigma, &top_eigs, rel, scale).outcome(format!("iii_sum_{tag}")));
        ends.push(ChainEnd {
            sigma,
            lambda: top_eigs.clone(),
        });
    }
    let inner = ends.pop().expect("two variants");
    let outer = ends.pop().expect("two variants");
    Ok(Theorem2Steps { r, steps, outer, inner })
}

/// Outcome of substituting `A → A^{1/(r+1)}`, `B → B^{1/(r+1)}` into the
/// chain and comparing its end against the direct check at the mapped `s`.
#[derive(Debug, Clone)]
pub struct SubstitutionOutcome {
    pub r: f64,
    pub branch: Branch,
    pub s: f64,
    pub chained: IndexedVerdict,
    pub direct: IndexedVerdict,
    pub chain_steps_hold: bool,
    pub max_value_diff: f64,
    pub agrees: bool,
}

pub fn substitution_check(
    a: &PsdMatrix,
    b: &PsdMatrix,
    r: f64,
    branch: Branch,
    tol: &Tolerances,
) -> Result<SubstitutionOutcome> {
    let s = s_from_r(r, branch)?;
    let p = 1.0 / (r + 1.0);
    let ap = PsdMatrix::new(a.power(p)?)?;
    let bp = PsdMatrix::new(b.power(p)?)?;
    let steps = theorem2_steps(&ap, &bp, r, tol)?;
    let end = steps.end(branch);
    let direct = super::zhan::zhan_check(a, b, s, tol)?;
    let chained = IndexedVerdict::leq(&end.sigma, &end.lambda, tol.loewner_rel, direct.scale);

    let max_value_diff = chained
        .comparisons
        .iter()
        .zip(&direct.comparisons)
        .map(|(c, d)| (c.lhs - d.lhs).abs().max((c.rhs - d.rhs).abs()))
        .fold(0.0, f64::max);
    let agrees = chained.holds == direct.holds && max_value_diff <= tol.loewner_rel * direct.scale;
    Ok(SubstitutionOutcome {
        r,
        branch,
        s,
        chain_steps_hold: steps.holds(),
        chained,
        direct,
        max_value_diff,
        agrees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_block_is_tight() {
        let z = PsdMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]).unwrap();
        let v = tao_check(&BlockPsd::new(z, 1, 1).unwrap(), &Tolerances::default()).unwrap();
        assert!(v.holds);
        let c = v.comparisons[0];
        assert!((c.lhs - 1.0).abs() < 1e-14 && (c.rhs - 1.0).abs() < 1e-14);
    }

    #[test]
    fn identity_block() {
        let z = BlockPsd::new(PsdMatrix::identity(4), 2, 2).unwrap();
        let v = tao_check(&z, &Tolerances::default()).unwrap();
        assert!(v.holds);
        assert!(v.comparisons.iter().all(|c| c.lhs == 0.0 && c.rhs == 0.5));
    }

    #[test]
    fn bad_split() {
        assert!(BlockPsd::new(PsdMatrix::identity(4), 1, 2).is_err());
        assert!(BlockPsd::new(PsdMatrix::identity(4), 0, 4).is_err());
    }

    #[test]
    fn r_zero_outside_variant_has_sum_block() {
        let a = PsdMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 1.0]]).unwrap();
        let b = PsdMatrix::diag(&[1.0, 3.0]).unwrap();
        let form = block_form(&a, &b, 0.0, BlockVariant::PowerOutside, &Tolerances::default()).unwrap();
        let sum = a.as_general().try_add(b.as_general()).unwrap();
        assert!(form.block.off_diagonal().max_abs_diff(&sum) < 1e-14);
        assert!(form.spectrum_check.holds);
    }

    #[test]
    fn s_mapping_endpoints() {
        assert_eq!(s_from_r(0.0, Branch::Outer).unwrap(), 1.0);
        assert_eq!(s_from_r(1.0, Branch::Outer).unwrap(), 0.75);
        assert_eq!(s_from_r(0.0, Branch::Inner).unwrap(), 0.5);
        assert_eq!(s_from_r(1.0, Branch::Inner).unwrap(), 0.75);
        assert!(s_from_r(1.5, Branch::Inner).is_err());
    }

    #[test]
    fn identity_pair_chain_is_equality() {
        let i = PsdMatrix::identity(2);
        let steps = theorem2_steps(&i, &i, 0.5, &Tolerances::default()).unwrap();
        assert!(steps.holds());
        for v in steps.outer.sigma.iter().chain(&steps.outer.lambda) {
            assert!((v - 2.0).abs() < 1e-14);
        }
    }
}
