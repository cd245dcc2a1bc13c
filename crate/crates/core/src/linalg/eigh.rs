//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq`, then applies the
//! classical real Jacobi rotation. Eigenvalues come out sorted non-increasing;
//! ties keep the order in which the solver produced them.

use num_complex::Complex64 as C64;

use super::matrix::{GeneralMatrix, HermitianMatrix};
use crate::error::{HeinzError, Result};

pub const MAX_SWEEPS: usize = 30;
pub const OFF_DIAGONAL_REL_TOL: f64 = 1e-14;

/// `A = U diag(λ) U*` with `λ` sorted non-increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Columns are the eigenvectors.
    pub basis: GeneralMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `U diag(g(λ)) U*` for a real-valued `g`.
    pub fn apply(&self, g: impl Fn(f64) -> f64) -> HermitianMatrix {
        let n = self.dim();
        let values: Vec<f64> = self.eigenvalues.iter().map(|&l| g(l)).collect();
        let u = &self.basis;
        let mut out = GeneralMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut acc = C64::new(0.0, 0.0);
                for (k, &v) in values.iter().enumerate() {
                    if v != 0.0 {
                        acc += u[(i, k)] * u[(j, k)].conj() * v;
                    }
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc.conj();
            }
        }
        HermitianMatrix::new(&out).expect("square finite by construction")
    }

    /// Rebuilds `U diag(λ) U*`.
    pub fn reconstruct(&self) -> HermitianMatrix {
        self.apply(|l| l)
    }

    pub fn max_abs_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l.abs()).fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }
}

fn off_diagonal_norm(a: &[C64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.
pub fn eigh(h: &HermitianMatrix) -> Result<SpectralDecomposition> {
    let n = h.dim();
    let mut a: Vec<C64> = h.as_general().as_slice().to_vec();
    let mut v = GeneralMatrix::identity(n);
    let frob = h.as_general().frobenius_norm();
    let threshold = OFF_DIAGONAL_REL_TOL * frob;

    let mut converged = off_diagonal_norm(&a, n) <= threshold;
    let mut sweep = 0;
    while !converged && sweep < MAX_SWEEPS {
        sweep += 1;
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let g = apq.norm();
                if g == 0.0 {
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                // Negligible pivot: drop it rather than rotate.
                if sweep > 3 && app.abs() + 100.0 * g == app.abs() && aqq.abs() + 100.0 * g == aqq.abs() {
                    a[p * n + q] = C64::new(0.0, 0.0);
                    a[q * n + p] = C64::new(0.0, 0.0);
                    continue;
                }
                rotated = true;
                let e = apq / g;
                let theta = (aqq - app) / (2.0 * g);
                let t = if theta.is_infinite() {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let jpq = e * s; // J[p][q]
                let jqp = -(e.conj()) * s; // J[q][p]

                // A <- A J (columns p, q)
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * c + akq * jqp;
                    a[k * n + q] = akp * jpq + akq * c;
                }
                // A <- J* A (rows p, q)
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = apk * c + aqk * jqp.conj();
                    a[q * n + k] = apk * jpq.conj() + aqk * c;
                }
                a[p * n + q] = C64::new(0.0, 0.0);
                a[q * n + p] = C64::new(0.0, 0.0);
                a[p * n + p] = C64::new(app - t * g, 0.0);
                a[q * n + q] = C64::new(aqq + t * g, 0.0);

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c + vkq * jqp;
                    v[(k, q)] = vkp * jpq + vkq * c;
                }
            }
        }
        converged = !rotated || off_diagonal_norm(&a, n) <= threshold;
    }
    if !converged {
        return Err(HeinzError::Convergence {
            algorithm: "jacobi eigh",
            sweeps: sweep,
            residual: off_diagonal_norm(&a, n),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    // Stable: equal eigenvalues keep generator order.
    order.sort_by(|&i, &j| a[j * n + j].re.total_cmp(&a[i * n + i].re));
    let eigenvalues = order.iter().map(|&i| a[i * n + i].re).collect();
    let basis = GeneralMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(SpectralDecomposition { eigenvalues, basis })
}

/// Eigenvalues only, sorted non-increasing.
pub fn eigvalsh(h: &HermitianMatrix) -> Result<Vec<f64>> {
    Ok(eigh(h)?.eigenvalues)
}

/// Operator norm of a Hermitian matrix, `max |λ|`.
pub fn hermitian_op_norm(h: &HermitianMatrix) -> Result<f64> {
    Ok(eigh(h)?.max_abs_eigenvalue())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residuals(h: &HermitianMatrix, d: &SpectralDecomposition) -> (f64, f64) {
        let n = h.dim();
        let u = &d.basis;
        let utu = &u.adjoint() * u;
        let orth = (&utu - &GeneralMatrix::identity(n)).max_abs();
        let rec = (d.reconstruct().as_general() - h.as_general()).max_abs();
        (orth, rec)
    }

    #[test]
    fn diagonal_input_sorted_with_permutation_basis() {
        let h = HermitianMatrix::diag_real(&[1.0, 2.0, 3.0]);
        let d = eigh(&h).unwrap();
        assert_eq!(d.eigenvalues, vec![3.0, 2.0, 1.0]);
        // column 0 is e_3
        assert_eq!(d.basis[(2, 0)], C64::new(1.0, 0.0));
        assert_eq!(d.basis[(0, 2)], C64::new(1.0, 0.0));
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let d = eigh(&HermitianMatrix::identity(5)).unwrap();
        assert!(d.eigenvalues.iter().all(|&l| l == 1.0));
    }

    #[test]
    fn complex_two_by_two() {
        // [[2, i],[-i, 2]] has eigenvalues 3 and 1.
        let m = GeneralMatrix::from_vec(
            2,
            2,
            vec![
                C64::new(2.0, 0.0),
                C64::new(0.0, 1.0),
                C64::new(0.0, -1.0),
                C64::new(2.0, 0.0),
            ],
        )
        .unwrap();
        let h = HermitianMatrix::new(&m).unwrap();
        let d = eigh(&h).unwrap();
        assert!((d.eigenvalues[0] - 3.0).abs() < 1e-14);
        assert!((d.eigenvalues[1] - 1.0).abs() < 1e-14);
        let (orth, rec) = residuals(&h, &d);
        assert!(orth < 1e-14 && rec < 1e-14);
    }

    #[test]
    fn rank_two_counterexample_matrix() {
        // characteristic polynomial x (x^2 - 14 x + 20)
        let h = HermitianMatrix::from_real_rows(&[&[2.0, 4.0, 2.0], &[4.0, 8.0, 4.0], &[2.0, 4.0, 4.0]]).unwrap();
        let d = eigh(&h).unwrap();
        let expected = [7.0 + 29f64.sqrt(), 7.0 - 29f64.sqrt(), 0.0];
        for (got, want) in d.eigenvalues.iter().zip(expected) {
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
        assert!(d.eigenvalues[1] > 0.0);
    }

    #[test]
    fn zero_matrix() {
        let d = eigh(&HermitianMatrix::zeros(3)).unwrap();
        assert_eq!(d.eigenvalues, vec![0.0; 3]);
    }
}
