//! Quality metrics (PSNR, SNR on the unit pixel scale) and best rank-k
//! truncation with its tail-energy identity.

use crate::matrix::{svd, Matrix, MatrixError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("SNR reference is identically zero")]
    ZeroReference,
    #[error("rank {k} exceeds min dimension {max}")]
    RankTooLarge { k: usize, max: usize },
}

fn check_shapes(reference: &Matrix, estimate: &Matrix) -> Result<(), MetricsError> {
    if reference.same_shape(estimate) {
        Ok(())
    } else {
        let (lr, lc) = reference.shape();
        let (rr, rc) = estimate.shape();
        Err(MatrixError::ShapeMismatch {
            left_rows: lr,
            left_cols: lc,
            right_rows: rr,
            right_cols: rc,
        }
        .into())
    }
}

/// `10 log10(n1 n2 / ||Y - Y*||_F^2)` in dB, assuming pixel values in [0, 1]
/// with unit peak. Identical inputs give `+inf`.
pub fn psnr(reference: &Matrix, estimate: &Matrix) -> Result<f64, MetricsError> {
    check_shapes(reference, estimate)?;
    let diff_sq = reference.sub(estimate).frobenius_norm_sq();
    if diff_sq == 0.0 {
        return Ok(f64::INFINITY);
    }
    let count = (reference.rows() * reference.cols()) as f64;
    Ok(10.0 * (count / diff_sq).log10())
}

/// `10 log10(||Y||_F^2 / ||Y - Y*||_F^2)` in dB. Identical inputs give `+inf`.
pub fn snr(reference: &Matrix, estimate: &Matrix) -> Result<f64, MetricsError> {
    check_shapes(reference, estimate)?;
    let ref_sq = reference.frobenius_norm_sq();
    if ref_sq == 0.0 {
        return Err(MetricsError::ZeroReference);
    }
    let diff_sq = reference.sub(estimate).frobenius_norm_sq();
    if diff_sq == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (ref_sq / diff_sq).log10())
}

/// Best rank-k approximation (top-k singular triples) and its residual.
///
/// The residual's squared Frobenius norm equals the sum of the squared
/// trailing singular values.
pub fn truncate_rank(m: &Matrix, k: usize) -> Result<(Matrix, Matrix), MetricsError> {
    let max = m.rows().min(m.cols());
    if k > max {
        return Err(MetricsError::RankTooLarge { k, max });
    }
    let decomp = svd(m)?;
    let kept: Vec<f64> = decomp
        .singular_values
        .iter()
        .enumerate()
        .map(|(i, &s)| if i < k { s } else { 0.0 })
        .collect();
    let approx = decomp.reconstruct_with(&kept);
    let residual = m.sub(&approx);
    Ok((approx, residual))
}
