//! Dense complex matrices, row-major, with the arithmetic the rest of the
//! crate needs. No sparsity, no views; sizes stay small enough that owned
//! buffers are the simplest correct thing.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Scalar = Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl DenseMatrix {
    /// Builds a matrix from row-major entries, rejecting length mismatches
    /// and non-finite values.
    pub fn from_vec(rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                left: (rows, cols),
                right: (entries.len(), 1),
            });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(DenseMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            entries: vec![Scalar::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        DenseMatrix { rows, cols, entries }
    }

    /// Real diagonal matrix.
    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Scalar::new(d, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn adjoint(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn add(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        self.zip_with(rhs, |a, b| a - b)
    }

    fn zip_with(&self, rhs: &DenseMatrix, f: impl Fn(Scalar, Scalar) -> Scalar) -> Result<DenseMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (rhs.rows, rhs.cols),
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn scale(&self, s: Scalar) -> DenseMatrix {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn matmul(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (rhs.rows, rhs.cols),
            });
        }
        let (m, k, n) = (self.rows, self.cols, rhs.cols);
        let mut out = vec![Scalar::ZERO; m * n];
        // i-k-j order keeps both operands in row-major streaming access.
        for i in 0..m {
            for p in 0..k {
                let a = self.entries[i * k + p];
                if a == Scalar::ZERO {
                    continue;
                }
                let row = &rhs.entries[p * n..(p + 1) * n];
                let dst = &mut out[i * n..(i + 1) * n];
                for j in 0..n {
                    dst[j] += a * row[j];
                }
            }
        }
        Ok(DenseMatrix {
            rows: m,
            cols: n,
            entries: out,
        })
    }

    /// `self^k` for square matrices; `k = 0` yields the identity.
    pub fn matrix_power(&self, k: usize) -> Result<DenseMatrix> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut acc = DenseMatrix::identity(self.rows);
        for _ in 0..k {
            acc = acc.matmul(self)?;
        }
        Ok(acc)
    }

    pub fn trace(&self) -> Scalar {
        let n = self.rows.min(self.cols);
        (0..n).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.entries.iter().map(|z| z.norm_sqr()).sum())
    }

    /// Largest entry modulus; zero for empty matrices.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, rhs: &DenseMatrix) -> Result<f64> {
        Ok(self.sub(rhs)?.max_abs())
    }

    /// Block-diagonal assembly of square blocks.
    pub fn block_diag(blocks: &[&DenseMatrix]) -> Result<DenseMatrix> {
        for b in blocks {
            if !b.is_square() {
                return Err(Error::NotSquare {
                    rows: b.rows,
                    cols: b.cols,
                });
            }
        }
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut out = DenseMatrix::zeros(n, n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out[(off + i, off + j)] = b[(i, j)];
                }
            }
            off += b.rows;
        }
        Ok(out)
    }

    pub fn direct_sum(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        DenseMatrix::block_diag(&[self, rhs])
    }

    /// Copies the square sub-block of size `len` whose upper-left corner sits
    /// at `(offset, offset)`.
    pub fn principal_block(&self, offset: usize, len: usize) -> Result<DenseMatrix> {
        if offset + len > self.rows || offset + len > self.cols {
            return Err(Error::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (offset + len, offset + len),
            });
        }
        Ok(DenseMatrix::from_fn(len, len, |i, j| {
            self[(offset + i, offset + j)]
        }))
    }

    /// Horizontal concatenation of the given columns (each `rows`-long).
    pub fn from_columns(rows: usize, columns: &[Vec<Scalar>]) -> Result<DenseMatrix> {
        for c in columns {
            if c.len() != rows {
                return Err(Error::DimensionMismatch {
                    left: (rows, 1),
                    right: (c.len(), 1),
                });
            }
        }
        Ok(DenseMatrix::from_fn(rows, columns.len(), |i, j| {
            columns[j][i]
        }))
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Matrix-vector product; the vector length must equal the column count.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length must match columns");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = Scalar;

    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Scalar {
        Scalar::new(re, im)
    }

    #[test]
    fn from_vec_rejects_bad_length_and_nan() {
        assert!(DenseMatrix::from_vec(2, 2, vec![Scalar::ZERO; 3]).is_err());
        let bad = vec![c(f64::NAN, 0.0), Scalar::ZERO];
        assert_eq!(DenseMatrix::from_vec(1, 2, bad), Err(Error::NonFinite));
    }

    #[test]
    fn matmul_identity_and_shapes() {
        let a = DenseMatrix::from_vec(2, 3, (0..6).map(|k| c(k as f64, 1.0)).collect()).unwrap();
        let id = DenseMatrix::identity(3);
        assert_eq!(a.matmul(&id).unwrap(), a);
        assert!(a.matmul(&a).is_err());
    }

    #[test]
    fn adjoint_conjugates_and_transposes() {
        let a = DenseMatrix::from_vec(1, 2, vec![c(1.0, 2.0), c(3.0, -4.0)]).unwrap();
        let ad = a.adjoint();
        assert_eq!(ad.rows(), 2);
        assert_eq!(ad[(0, 0)], c(1.0, -2.0));
        assert_eq!(ad[(1, 0)], c(3.0, 4.0));
    }

    #[test]
    fn block_diag_layout() {
        let a = DenseMatrix::identity(1);
        let b = DenseMatrix::from_vec(2, 2, vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]).unwrap();
        let s = DenseMatrix::block_diag(&[&a, &b]).unwrap();
        assert_eq!(s.rows(), 3);
        assert_eq!(s[(0, 0)], Scalar::ONE);
        assert_eq!(s[(1, 2)], Scalar::ONE);
        assert_eq!(s[(0, 1)], Scalar::ZERO);
    }

    #[test]
    fn matrix_power_zero_is_identity() {
        let a = DenseMatrix::from_vec(2, 2, vec![c(0., 1.), c(2., 0.), c(0., 0.), c(1., 1.)]).unwrap();
        assert_eq!(a.matrix_power(0).unwrap(), DenseMatrix::identity(2));
        assert_eq!(a.matrix_power(1).unwrap(), a);
        let sq = a.matmul(&a).unwrap();
        assert_eq!(a.matrix_power(2).unwrap(), sq);
    }

    #[test]
    fn trace_sums_diagonal() {
        let a = DenseMatrix::from_diag(&[3.0, 1.0, 2.0]);
        assert_eq!(a.trace(), c(6.0, 0.0));
    }
}
