//! Dense matrices, observation masks, and the SVD/masked-entry algebra the
//! solver is built on.
//!
//! Everything is `f64`, row-major, zero-indexed. Matrices are immutable value
//! objects once constructed; all operations here are pure functions.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MatrixError {
    #[error("data length {len} does not match {rows}x{cols}")]
    DataLength { rows: usize, cols: usize, len: usize },
    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    EmptyDimensions { rows: usize, cols: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("shape mismatch: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    ShapeMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("SVD failed to converge on a {rows}x{cols} matrix")]
    SvdFailed { rows: usize, cols: usize },
}

/// Dense real matrix with row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Builds a matrix from row-major data, validating shape and finiteness.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 {
            return Err(MatrixError::EmptyDimensions { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(MatrixError::DataLength { rows, cols, len: data.len() });
        }
        if let Some(idx) = data.iter().position(|v| !v.is_finite()) {
            return Err(MatrixError::NonFinite { row: idx / cols, col: idx % cols });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Square matrix with `diag` on the main diagonal.
    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i] } else { 0.0 })
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

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.data[row * self.cols + col] = value;
    }

    pub fn same_shape(&self, other: &Matrix) -> bool {
        self.rows == other.rows && self.cols == other.cols
    }

    fn check_shape(&self, other: &Matrix) -> Result<(), MatrixError> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(MatrixError::ShapeMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: other.rows,
                right_cols: other.cols,
            })
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&v| f(v)).collect() }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        debug_assert!(self.same_shape(other));
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        debug_assert!(self.same_shape(other));
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, c: f64) -> Matrix {
        self.map(|v| c * v)
    }

    fn zip(&self, other: &Matrix, f: impl Fn(f64, f64) -> f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    /// Sum of squared entries.
    pub fn frobenius_norm_sq(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.frobenius_norm_sq().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }
}

/// Boolean mask marking which entries of a matrix are observed.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationMask {
    rows: usize,
    cols: usize,
    observed: Vec<bool>,
}

impl ObservationMask {
    pub fn new(rows: usize, cols: usize, observed: Vec<bool>) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 {
            return Err(MatrixError::EmptyDimensions { rows, cols });
        }
        if observed.len() != rows * cols {
            return Err(MatrixError::DataLength { rows, cols, len: observed.len() });
        }
        Ok(Self { rows, cols, observed })
    }

    /// Every entry observed.
    pub fn full(rows: usize, cols: usize) -> Self {
        Self { rows, cols, observed: vec![true; rows * cols] }
    }

    /// No entry observed.
    pub fn empty(rows: usize, cols: usize) -> Self {
        Self { rows, cols, observed: vec![false; rows * cols] }
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

    #[inline]
    pub fn is_observed(&self, row: usize, col: usize) -> bool {
        self.observed[row * self.cols + col]
    }

    pub fn flags(&self) -> &[bool] {
        &self.observed
    }

    pub fn observed_count(&self) -> usize {
        self.observed.iter().filter(|&&o| o).count()
    }

    pub fn len(&self) -> usize {
        self.observed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observed.is_empty()
    }

    /// Mask of the complementary index set.
    pub fn complement(&self) -> ObservationMask {
        ObservationMask {
            rows: self.rows,
            cols: self.cols,
            observed: self.observed.iter().map(|&o| !o).collect(),
        }
    }

    pub fn matches(&self, m: &Matrix) -> bool {
        self.rows == m.rows() && self.cols == m.cols()
    }
}

/// Thin singular value decomposition `U * diag(s) * Vt`.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub u: Matrix,
    pub singular_values: Vec<f64>,
    pub vt: Matrix,
}

impl SvdResult {
    /// Rebuilds `U * diag(values) * Vt` with the stored singular vectors and
    /// the given values (defaults to the stored ones via [`Self::reconstruct`]).
    pub fn reconstruct_with(&self, values: &[f64]) -> Matrix {
        assert_eq!(values.len(), self.singular_values.len());
        let (rows, r) = self.u.shape();
        let cols = self.vt.cols();
        let mut out = Matrix::zeros(rows, cols);
        for k in 0..r {
            let s = values[k];
            if s == 0.0 {
                continue;
            }
            for i in 0..rows {
                let us = self.u.get(i, k) * s;
                for j in 0..cols {
                    out.set(i, j, out.get(i, j) + us * self.vt.get(k, j));
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> Matrix {
        self.reconstruct_with(&self.singular_values)
    }
}

/// Thin SVD with singular values sorted descending.
pub fn svd(m: &Matrix) -> Result<SvdResult, MatrixError> {
    let (rows, cols) = m.shape();
    let dm = nalgebra::DMatrix::from_row_slice(rows, cols, m.data());
    let decomp = nalgebra::linalg::SVD::try_new(dm, true, true, f64::EPSILON, 10_000)
        .ok_or(MatrixError::SvdFailed { rows, cols })?;
    let u = decomp.u.ok_or(MatrixError::SvdFailed { rows, cols })?;
    let vt = decomp.v_t.ok_or(MatrixError::SvdFailed { rows, cols })?;
    let mut values: Vec<f64> = decomp.singular_values.iter().copied().collect();
    let r = values.len();

    // nalgebra sorts, but the descending order is an invariant here, so enforce it.
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap());
    let sorted_values: Vec<f64> = order.iter().map(|&k| values[k]).collect();
    values = sorted_values;

    let u_mat = Matrix::from_fn(rows, r, |i, k| u[(i, order[k])]);
    let vt_mat = Matrix::from_fn(r, cols, |k, j| vt[(order[k], j)]);
    Ok(SvdResult { u: u_mat, singular_values: values, vt: vt_mat })
}

/// Keeps entries on the observed set, zeroes the rest.
pub fn restrict(m: &Matrix, mask: &ObservationMask) -> Result<Matrix, MatrixError> {
    if !mask.matches(m) {
        return Err(MatrixError::ShapeMismatch {
            left_rows: m.rows(),
            left_cols: m.cols(),
            right_rows: mask.rows(),
            right_cols: mask.cols(),
        });
    }
    Ok(restrict_unchecked(m, mask))
}

pub(crate) fn restrict_unchecked(m: &Matrix, mask: &ObservationMask) -> Matrix {
    let data = m
        .data()
        .iter()
        .zip(mask.flags())
        .map(|(&v, &obs)| if obs { v } else { 0.0 })
        .collect();
    Matrix { rows: m.rows(), cols: m.cols(), data }
}

/// Takes `on_omega` on the observed set and `off_omega` elsewhere.
pub fn blend(
    on_omega: &Matrix,
    off_omega: &Matrix,
    mask: &ObservationMask,
) -> Result<Matrix, MatrixError> {
    on_omega.check_shape(off_omega)?;
    if !mask.matches(on_omega) {
        return Err(MatrixError::ShapeMismatch {
            left_rows: on_omega.rows(),
            left_cols: on_omega.cols(),
            right_rows: mask.rows(),
            right_cols: mask.cols(),
        });
    }
    Ok(blend_unchecked(on_omega, off_omega, mask))
}

pub(crate) fn blend_unchecked(
    on_omega: &Matrix,
    off_omega: &Matrix,
    mask: &ObservationMask,
) -> Matrix {
    let data = on_omega
        .data()
        .iter()
        .zip(off_omega.data())
        .zip(mask.flags())
        .map(|((&on, &off), &obs)| if obs { on } else { off })
        .collect();
    Matrix { rows: on_omega.rows(), cols: on_omega.cols(), data }
}
