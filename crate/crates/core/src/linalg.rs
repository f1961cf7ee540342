//! Dense linear-algebra kernels.
//!
//! [`DenseMatrix`] is a plain row-major `f64` matrix. The singular value
//! decomposition is delegated to `nalgebra`; everything else (thresholding
//! operators, norms, numerical rank) is computed here on top of it.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use nalgebra::DMatrix;

use crate::error::{invalid, Error, Result};

/// Iteration cap handed to the bidiagonal QR sweep of the SVD.
const SVD_MAX_ITERATIONS: usize = 10_000;

/// Row-major dense real matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    /// Builds a matrix from row-major entries, rejecting wrong lengths and
    /// non-finite values.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{} entries ({rows}x{cols})", rows * cols),
                found: format!("{} entries", data.len()),
            });
        }
        if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / cols.max(1),
                col: pos % cols.max(1),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from a slice of equally long rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: format!("{cols} columns"),
                    found: format!("{} columns in row {i}", r.len()),
                });
            }
            data.extend_from_slice(r);
        }
        Self::new(rows.len(), cols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Square diagonal matrix.
    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        let mut data = vec![0.0; n * n];
        for (i, d) in diag.iter().enumerate() {
            data[i * n + i] = *d;
        }
        Self::new(n, n, data)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Row-major entries.
    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        out
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn scale(&self, factor: f64) -> Self {
        self.map(|x| x * factor)
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{}x{}", self.rows, self.cols),
                found: format!("{}x{}", other.rows, other.cols),
            });
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    /// `self + factor * other`, in place.
    pub fn add_scaled_assign(&mut self, factor: f64, other: &Self) -> Result<()> {
        self.check_same_shape(other)?;
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += factor * b;
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: format!("{} rows on the right operand", self.cols),
                found: format!("{}", other.rows),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0.0 {
                    continue;
                }
                let b_row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Largest absolute entry (the elementwise infinity norm).
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, x| acc.max(x.abs()))
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Copy with rows and columns reordered: `out[i][j] = self[row_perm[i]][col_perm[j]]`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Result<Self> {
        if row_perm.len() != self.rows || col_perm.len() != self.cols {
            return Err(invalid("permutation length does not match matrix shape"));
        }
        let mut out = Self::zeros(self.rows, self.cols);
        for (i, &pi) in row_perm.iter().enumerate() {
            for (j, &pj) in col_perm.iter().enumerate() {
                out.data[i * self.cols + j] = self.data[pi * self.cols + pj];
            }
        }
        Ok(out)
    }

    fn to_nalgebra(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Thin singular value decomposition `m = U diag(s) V^T` with `k = min(rows, cols)`.
#[derive(Debug, Clone)]
pub struct SvdResult {
    /// `rows x k`, orthonormal columns.
    pub left_vectors: DenseMatrix,
    /// Non-increasing, non-negative.
    pub singular_values: Vec<f64>,
    /// `cols x k`, orthonormal columns.
    pub right_vectors: DenseMatrix,
}

impl SvdResult {
    /// `U diag(f(s)) V^T`, skipping components mapped to zero.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> DenseMatrix {
        let rows = self.left_vectors.rows();
        let cols = self.right_vectors.rows();
        let k = self.singular_values.len();
        let mut out = DenseMatrix::zeros(rows, cols);
        for c in 0..k {
            let s = f(self.singular_values[c]);
            if s == 0.0 {
                continue;
            }
            for i in 0..rows {
                let us = self.left_vectors[(i, c)] * s;
                if us == 0.0 {
                    continue;
                }
                let out_row = &mut out.data[i * cols..(i + 1) * cols];
                for (j, o) in out_row.iter_mut().enumerate() {
                    *o += us * self.right_vectors[(j, c)];
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> DenseMatrix {
        self.reconstruct_with(|s| s)
    }
}

/// Thin SVD with singular values sorted in non-increasing order.
pub fn svd(m: &DenseMatrix) -> Result<SvdResult> {
    if m.is_empty() {
        return Err(invalid("svd of an empty matrix"));
    }
    let k = m.rows.min(m.cols);
    let decomposition =
        nalgebra::linalg::SVD::try_new(m.to_nalgebra(), true, true, f64::EPSILON, SVD_MAX_ITERATIONS)
            .ok_or(Error::SvdNotConverged {
                iterations: SVD_MAX_ITERATIONS,
            })?;
    let (u, v_t) = match (decomposition.u, decomposition.v_t) {
        (Some(u), Some(v_t)) => (u, v_t),
        _ => {
            return Err(Error::SvdNotConverged {
                iterations: SVD_MAX_ITERATIONS,
            })
        }
    };
    let sigma = decomposition.singular_values;

    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| sigma[b].total_cmp(&sigma[a]).then(a.cmp(&b)));

    let mut left = DenseMatrix::zeros(m.rows, k);
    let mut right = DenseMatrix::zeros(m.cols, k);
    let mut values = Vec::with_capacity(k);
    for (dst, &src) in order.iter().enumerate() {
        values.push(sigma[src].max(0.0));
        for i in 0..m.rows {
            left[(i, dst)] = u[(i, src)];
        }
        for j in 0..m.cols {
            right[(j, dst)] = v_t[(src, j)];
        }
    }
    if values.iter().any(|s| !s.is_finite()) {
        return Err(Error::SvdNotConverged {
            iterations: SVD_MAX_ITERATIONS,
        });
    }
    Ok(SvdResult {
        left_vectors: left,
        singular_values: values,
        right_vectors: right,
    })
}

#[inline]
pub(crate) fn shrink(x: f64, tau: f64) -> f64 {
    if x > tau {
        x - tau
    } else if x < -tau {
        x + tau
    } else {
        0.0
    }
}

fn check_threshold(tau: f64) -> Result<()> {
    if tau.is_nan() || tau < 0.0 || tau.is_infinite() {
        return Err(invalid(format!("threshold must be finite and non-negative, got {tau}")));
    }
    Ok(())
}

/// Elementwise shrinkage `sign(x) * max(|x| - tau, 0)`: the proximal map of `tau * ||.||_1`.
pub fn soft_threshold(m: &DenseMatrix, tau: f64) -> Result<DenseMatrix> {
    check_threshold(tau)?;
    Ok(m.map(|x| shrink(x, tau)))
}

/// Singular value shrinkage: the proximal map of `tau * ||.||_*`.
pub fn singular_value_threshold(m: &DenseMatrix, tau: f64) -> Result<DenseMatrix> {
    check_threshold(tau)?;
    Ok(svd(m)?.reconstruct_with(|s| (s - tau).max(0.0)))
}

/// Sum of singular values.
pub fn nuclear_norm(m: &DenseMatrix) -> Result<f64> {
    Ok(svd(m)?.singular_values.iter().sum())
}

/// Sum of absolute entries.
pub fn l1_norm(m: &DenseMatrix) -> f64 {
    m.data.iter().map(|x| x.abs()).sum()
}

pub fn frobenius_norm(m: &DenseMatrix) -> f64 {
    libm::sqrt(m.data.iter().map(|x| x * x).sum())
}

/// Number of singular values above `max(rows, cols) * eps * sigma_max`.
pub fn numerical_rank(m: &DenseMatrix) -> Result<usize> {
    let result = svd(m)?;
    Ok(rank_from_singular_values(&result.singular_values, m.rows.max(m.cols)))
}

pub(crate) fn rank_from_singular_values(values: &[f64], max_dim: usize) -> usize {
    let largest = values.first().copied().unwrap_or(0.0);
    let tol = max_dim as f64 * f64::EPSILON * largest;
    values.iter().filter(|&&s| s > tol).count()
}
