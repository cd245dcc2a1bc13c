//! Dense complex matrices.
//!
//! [`GeneralMatrix`] is a plain row-major container with the handful of
//! arithmetic operations the checkers need. [`HermitianMatrix`] wraps one and
//! guarantees `m[i][j] == conj(m[j][i])` bit-for-bit, which the constructor
//! enforces by symmetrizing `(M + M*)/2`.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{HeinzError, Result};

pub type C64 = Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct GeneralMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl GeneralMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting wrong lengths and
    /// non-finite values.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(HeinzError::Schema(format!("empty shape {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(HeinzError::Schema(format!(
                "{} entries for shape {rows}x{cols}",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(HeinzError::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Real matrix from nested rows. Panics on ragged input; meant for literals.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_fn(r, c, |i, j| C64::new(rows[i][j], 0.0))
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(values[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.shape(), other.shape());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Matrix product with a shape check.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(HeinzError::DimensionMismatch {
                context: "matmul",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, "add", |a, b| a + b)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, "sub", |a, b| a - b)
    }

    fn zip_with(&self, rhs: &Self, context: &'static str, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(HeinzError::DimensionMismatch {
                context,
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    /// Copies the block starting at `(r0, c0)` of the given shape.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    /// Stacks `top` over `bottom`.
    pub fn vstack(top: &Self, bottom: &Self) -> Result<Self> {
        if top.cols != bottom.cols {
            return Err(HeinzError::DimensionMismatch {
                context: "vstack",
                left: top.shape(),
                right: bottom.shape(),
            });
        }
        let mut data = top.data.clone();
        data.extend_from_slice(&bottom.data);
        Ok(Self {
            rows: top.rows + bottom.rows,
            cols: top.cols,
            data,
        })
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }
}

impl Index<(usize, usize)> for GeneralMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for GeneralMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

// Operator forms panic on shape mismatch; the `try_*` forms return errors.
impl Mul for &GeneralMatrix {
    type Output = GeneralMatrix;

    fn mul(self, rhs: &GeneralMatrix) -> GeneralMatrix {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add for &GeneralMatrix {
    type Output = GeneralMatrix;

    fn add(self, rhs: &GeneralMatrix) -> GeneralMatrix {
        self.try_add(rhs).expect("matrix sum shape mismatch")
    }
}

impl Sub for &GeneralMatrix {
    type Output = GeneralMatrix;

    fn sub(self, rhs: &GeneralMatrix) -> GeneralMatrix {
        self.try_sub(rhs).expect("matrix difference shape mismatch")
    }
}

impl Neg for &GeneralMatrix {
    type Output = GeneralMatrix;

    fn neg(self) -> GeneralMatrix {
        self.scale(-1.0)
    }
}

/// Complex Hermitian matrix, stored exactly symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(GeneralMatrix);

impl HermitianMatrix {
    /// Symmetrizes `(M + M*)/2`. The diagonal is made exactly real.
    pub fn new(m: &GeneralMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(HeinzError::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        if !m.is_finite() {
            return Err(HeinzError::NonFinite);
        }
        let n = m.rows();
        let mut h = GeneralMatrix::zeros(n, n);
        for i in 0..n {
            h[(i, i)] = C64::new(m[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let v = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
                h[(i, j)] = v;
                h[(j, i)] = v.conj();
            }
        }
        Ok(Self(h))
    }

    pub fn identity(n: usize) -> Self {
        Self(GeneralMatrix::identity(n))
    }

    pub fn zeros(n: usize) -> Self {
        Self(GeneralMatrix::zeros(n, n))
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::new(&GeneralMatrix::from_real_rows(rows))
    }

    pub fn diag_real(values: &[f64]) -> Self {
        Self(GeneralMatrix::diag_real(values))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn as_general(&self) -> &GeneralMatrix {
        &self.0
    }

    pub fn into_general(self) -> GeneralMatrix {
        self.0
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        Self::new(&self.0.try_add(&rhs.0)?)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        Self::new(&self.0.try_sub(&rhs.0)?)
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self(self.0.scale(factor))
    }

    /// `X H X*`, symmetrized.
    pub fn congruence(&self, x: &GeneralMatrix) -> Result<Self> {
        let t = x.matmul(&self.0)?.matmul(&x.adjoint())?;
        Self::new(&t)
    }

    /// Adds `shift` to the diagonal.
    pub fn shift(&self, shift: f64) -> Self {
        let mut m = self.0.clone();
        for i in 0..m.rows() {
            m[(i, i)].re += shift;
        }
        Self(m)
    }
}

impl Index<(usize, usize)> for HermitianMatrix {
    type Output = C64;

    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.0[idx]
    }
}

impl AsRef<GeneralMatrix> for HermitianMatrix {
    fn as_ref(&self) -> &GeneralMatrix {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermitian_constructor_symmetrizes_exactly() {
        let m = GeneralMatrix::from_vec(
            2,
            2,
            vec![
                C64::new(1.0, 0.3),
                C64::new(2.0, 1.0),
                C64::new(0.0, 0.0),
                C64::new(3.0, -1.0),
            ],
        )
        .unwrap();
        let h = HermitianMatrix::new(&m).unwrap();
        assert_eq!(h[(0, 1)], h[(1, 0)].conj());
        assert_eq!(h[(0, 0)].im, 0.0);
        assert_eq!(h[(0, 1)], C64::new(1.0, 0.5));
    }

    #[test]
    fn rejects_bad_shapes_and_nan() {
        assert!(GeneralMatrix::from_vec(2, 2, vec![C64::new(1.0, 0.0); 3]).is_err());
        assert_eq!(
            GeneralMatrix::from_vec(1, 1, vec![C64::new(f64::NAN, 0.0)]),
            Err(HeinzError::NonFinite)
        );
        let rect = GeneralMatrix::zeros(2, 3);
        assert!(matches!(HermitianMatrix::new(&rect), Err(HeinzError::NotSquare { .. })));
        assert!(rect.matmul(&rect).is_err());
    }

    #[test]
    fn product_and_adjoint() {
        let a = GeneralMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let b = GeneralMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let ab = &a * &b;
        assert_eq!(ab, GeneralMatrix::from_real_rows(&[&[2.0, 1.0], &[4.0, 3.0]]));
        assert_eq!(a.adjoint()[(0, 1)], C64::new(3.0, 0.0));
        let stacked = GeneralMatrix::vstack(&a, &b).unwrap();
        assert_eq!(stacked.shape(), (4, 2));
        assert_eq!(stacked.block(2, 0, 2, 2), b);
    }
}
