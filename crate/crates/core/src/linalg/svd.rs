//! Singular values by one-sided (Hestenes) Jacobi.
//!
//! Columns are orthogonalized pairwise with the same phase-then-rotate step
//! as the eigensolver; the singular values are the final column norms. Working
//! on `M` directly keeps absolute accuracy near `eps * ||M||` for the small
//! singular values, which a Gram-matrix route would square away.

use num_complex::Complex64 as C64;

use super::matrix::GeneralMatrix;
use crate::error::{HeinzError, Result};

const MAX_SWEEPS: usize = 30;

/// Singular values sorted non-increasing, all non-negative.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularValues {
    pub values: Vec<f64>,
}

impl SingularValues {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// 1-based access, matching the `σ_j` convention.
    pub fn sigma(&self, j: usize) -> f64 {
        self.values[j - 1]
    }

    pub fn largest(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }
}

pub fn singular_values(m: &GeneralMatrix) -> Result<SingularValues> {
    if !m.is_finite() {
        return Err(HeinzError::NonFinite);
    }
    // Orthogonalize the columns of the taller orientation.
    let work = if m.rows() >= m.cols() { m.clone() } else { m.adjoint() };
    let rows = work.rows();
    let cols = work.cols();
    let mut columns: Vec<Vec<C64>> = (0..cols).map(|j| work.column(j)).collect();
    let tol = (rows as f64) * f64::EPSILON;
    // Columns below this squared norm are rounding noise; rotating them
    // against each other never settles and cannot change any value by more
    // than `eps * ||M||`.
    let noise = (f64::EPSILON * m.frobenius_norm()).powi(2);

    let mut sweep = 0;
    let mut converged = cols < 2;
    let mut worst = 0.0_f64;
    while !converged && sweep < MAX_SWEEPS {
        sweep += 1;
        let mut rotated = false;
        worst = 0.0;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let (alpha, beta, gamma) = {
                    let (cp, cq) = (&columns[p], &columns[q]);
                    let alpha: f64 = cp.iter().map(|z| z.norm_sqr()).sum();
                    let beta: f64 = cq.iter().map(|z| z.norm_sqr()).sum();
                    let gamma: C64 = cp.iter().zip(cq).map(|(a, b)| a.conj() * b).sum();
                    (alpha, beta, gamma)
                };
                let g = gamma.norm();
                if g == 0.0 || alpha.min(beta) <= noise {
                    continue;
                }
                let rel = g / (alpha * beta).sqrt();
                worst = worst.max(rel);
                if rel <= tol {
                    continue;
                }
                rotated = true;
                let e = gamma / g;
                let theta = (beta - alpha) / (2.0 * g);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let jpq = e * s;
                let jqp = -(e.conj()) * s;
                let (left, right) = columns.split_at_mut(q);
                let cp = &mut left[p];
                let cq = &mut right[0];
                for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
                    let (xp, xq) = (*x, *y);
                    *x = xp * c + xq * jqp;
                    *y = xp * jpq + xq * c;
                }
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(HeinzError::Convergence {
            algorithm: "one-sided jacobi svd",
            sweeps: sweep,
            residual: worst,
        });
    }
    let mut values: Vec<f64> = columns
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(SingularValues { values })
}

/// Largest singular value.
pub fn op_norm(m: &GeneralMatrix) -> Result<f64> {
    Ok(singular_values(m)?.largest())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_with_negative_entry() {
        let s = singular_values(&GeneralMatrix::diag_real(&[3.0, -4.0])).unwrap();
        assert_eq!(s.values, vec![4.0, 3.0]);
    }

    #[test]
    fn nilpotent_shift() {
        let m = GeneralMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let s = singular_values(&m).unwrap();
        assert_eq!(s.values, vec![1.0, 0.0]);
    }

    #[test]
    fn rotation_is_unitary() {
        let (c, s) = (0.6, 0.8);
        let m = GeneralMatrix::from_vec(
            2,
            2,
            vec![C64::new(c, 0.0), C64::new(0.0, s), C64::new(0.0, s), C64::new(c, 0.0)],
        )
        .unwrap();
        let sv = singular_values(&m).unwrap();
        for v in sv.values {
            assert!((v - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn wide_and_tall_agree() {
        let m = GeneralMatrix::from_real_rows(&[&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]]);
        let a = singular_values(&m).unwrap();
        let b = singular_values(&m.adjoint()).unwrap();
        assert_eq!(a.len(), 2);
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).abs() < 1e-13);
        }
        // sum of squares equals Frobenius norm squared (91)
        let ss: f64 = a.values.iter().map(|v| v * v).sum();
        assert!((ss - 91.0).abs() < 1e-12);
    }

    #[test]
    fn rank_deficient_small_values_stay_small() {
        // rank one: u v^T
        let m = GeneralMatrix::from_fn(4, 4, |i, j| C64::new((i + 1) as f64 * (j as f64 - 1.5), 0.0));
        let s = singular_values(&m).unwrap();
        for v in &s.values[1..] {
            assert!(*v < 1e-14 * s.values[0], "{v}");
        }
    }
}
