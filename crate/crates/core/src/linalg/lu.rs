//! LU factorization with partial pivoting, for resolvents and inverses.

use num_complex::Complex64 as C64;

use super::matrix::GeneralMatrix;
use crate::error::{HeinzError, Result};

/// Solves `A X = B`.
pub fn solve(a: &GeneralMatrix, b: &GeneralMatrix) -> Result<GeneralMatrix> {
    if !a.is_square() {
        return Err(HeinzError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if a.rows() != b.rows() {
        return Err(HeinzError::DimensionMismatch {
            context: "solve",
            left: a.shape(),
            right: b.shape(),
        });
    }
    let n = a.rows();
    let m = b.cols();
    let mut lu: Vec<C64> = a.as_slice().to_vec();
    let mut x: Vec<C64> = b.as_slice().to_vec();
    let scale = a.max_abs().max(f64::MIN_POSITIVE);

    for k in 0..n {
        let (piv, pmax) =
            (k..n)
                .map(|i| (i, lu[i * n + k].norm()))
                .fold((k, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if pmax <= scale * f64::EPSILON * 1e-3 {
            return Err(HeinzError::Singular { pivot: pmax });
        }
        if piv != k {
            for j in 0..n {
                lu.swap(k * n + j, piv * n + j);
            }
            for j in 0..m {
                x.swap(k * m + j, piv * m + j);
            }
        }
        let d = lu[k * n + k];
        for i in (k + 1)..n {
            let f = lu[i * n + k] / d;
            if f.re == 0.0 && f.im == 0.0 {
                continue;
            }
            lu[i * n + k] = f;
            for j in (k + 1)..n {
                let t = lu[k * n + j];
                lu[i * n + j] -= f * t;
            }
            for j in 0..m {
                let t = x[k * m + j];
                x[i * m + j] -= f * t;
            }
        }
    }
    for k in (0..n).rev() {
        let d = lu[k * n + k];
        for j in 0..m {
            let mut acc = x[k * m + j];
            for l in (k + 1)..n {
                acc -= lu[k * n + l] * x[l * m + j];
            }
            x[k * m + j] = acc / d;
        }
    }
    GeneralMatrix::from_vec(n, m, x)
}

pub fn inverse(a: &GeneralMatrix) -> Result<GeneralMatrix> {
    solve(a, &GeneralMatrix::identity(a.rows()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_small_matrix() {
        let a = GeneralMatrix::from_real_rows(&[&[0.0, 2.0], &[1.0, 1.0]]);
        let inv = inverse(&a).unwrap();
        let id = &a * &inv;
        assert!(id.max_abs_diff(&GeneralMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn singular_is_reported() {
        let a = GeneralMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert!(matches!(inverse(&a), Err(HeinzError::Singular { .. })));
    }
}
