//! Degradation mask generation: seeded random missing entries, block unions,
//! and masks loaded from image files.

use crate::matrix::ObservationMask;
use crate::pgm::{self, PgmError};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MaskError {
    #[error("missing fraction must lie in [0, 1], got {0}")]
    InvalidFraction(f64),
    #[error("rectangle ({row}, {col}, {height}x{width}) exceeds {rows}x{cols}")]
    RectOutOfBounds { row: usize, col: usize, height: usize, width: usize, rows: usize, cols: usize },
    #[error("mask image is {got_rows}x{got_cols}, expected {rows}x{cols}")]
    ImageShapeMismatch { got_rows: usize, got_cols: usize, rows: usize, cols: usize },
    #[error("mask dimensions must be positive")]
    EmptyDimensions,
    #[error(transparent)]
    Image(#[from] PgmError),
}

/// Axis-aligned rectangle of missing entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockRect {
    pub row: usize,
    pub col: usize,
    pub height: usize,
    pub width: usize,
}

/// How to degrade a matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum MaskSpec {
    /// Exactly `round(missing_fraction * rows * cols)` entries removed,
    /// chosen by a seeded shuffle.
    Random { missing_fraction: f64, seed: u64 },
    /// Union of rectangles removed.
    Blocks { rectangles: Vec<BlockRect> },
    /// Nonzero pixels of a P5 image mark missing entries.
    FromImage { path: PathBuf },
}

/// Builds an observation mask for a `rows x cols` matrix from the spec.
pub fn make_mask(spec: &MaskSpec, rows: usize, cols: usize) -> Result<ObservationMask, MaskError> {
    if rows == 0 || cols == 0 {
        return Err(MaskError::EmptyDimensions);
    }
    let total = rows * cols;
    match spec {
        MaskSpec::Random { missing_fraction, seed } => {
            if !(0.0..=1.0).contains(missing_fraction) {
                return Err(MaskError::InvalidFraction(*missing_fraction));
            }
            let missing = (missing_fraction * total as f64).round() as usize;
            let mut indices: Vec<usize> = (0..total).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            indices.shuffle(&mut rng);
            let mut observed = vec![true; total];
            for &idx in indices.iter().take(missing) {
                observed[idx] = false;
            }
            Ok(ObservationMask::new(rows, cols, observed).expect("length matches by construction"))
        }
        MaskSpec::Blocks { rectangles } => {
            let mut observed = vec![true; total];
            for rect in rectangles {
                let fits = rect.height > 0
                    && rect.width > 0
                    && rect.row.checked_add(rect.height).is_some_and(|end| end <= rows)
                    && rect.col.checked_add(rect.width).is_some_and(|end| end <= cols);
                if !fits {
                    return Err(MaskError::RectOutOfBounds {
                        row: rect.row,
                        col: rect.col,
                        height: rect.height,
                        width: rect.width,
                        rows,
                        cols,
                    });
                }
                for r in rect.row..rect.row + rect.height {
                    for c in rect.col..rect.col + rect.width {
                        observed[r * cols + c] = false;
                    }
                }
            }
            Ok(ObservationMask::new(rows, cols, observed).expect("length matches by construction"))
        }
        MaskSpec::FromImage { path } => {
            let image = pgm::read_pgm(path)?;
            if image.rows != rows || image.cols != cols {
                return Err(MaskError::ImageShapeMismatch {
                    got_rows: image.rows,
                    got_cols: image.cols,
                    rows,
                    cols,
                });
            }
            let observed = image.pixels.iter().map(|&v| v == 0).collect();
            Ok(ObservationMask::new(rows, cols, observed).expect("length matches by construction"))
        }
    }
}

/// Missing fraction of the mask: `1 - observed / total`.
pub fn sampling_rate(mask: &ObservationMask) -> f64 {
    1.0 - mask.observed_count() as f64 / mask.len() as f64
}
