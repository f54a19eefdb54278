//! Matrix <-> image conversions on the unit pixel scale, plus the raw float
//! dump used for lossless inspection of signed data.

use crate::error::CliError;
use oger_core::matrix::Matrix;
use oger_core::pgm::{read_pgm, write_pgm, PgmImage};
use std::io::Write;
use std::path::Path;

/// Loads a P5 image as a matrix with entries in [0, 1] (value / 255).
pub fn load_image(path: impl AsRef<Path>) -> Result<Matrix, CliError> {
    let image = read_pgm(path.as_ref())?;
    Ok(Matrix::from_fn(image.rows, image.cols, |i, j| {
        image.pixels[i * image.cols + j] as f64 / 255.0
    }))
}

/// Saves a matrix as P5, clamping to [0, 1] and rounding to 8 bits.
pub fn save_image(m: &Matrix, path: impl AsRef<Path>) -> Result<(), CliError> {
    let pixels = m.data().iter().map(|&v| (v.clamp(0.0, 1.0) * 255.0).round() as u8).collect();
    let image = PgmImage { rows: m.rows(), cols: m.cols(), pixels };
    write_pgm(path.as_ref(), &image)?;
    Ok(())
}

/// Min-max rescale to [0, 1] for displaying signed data; a (numerically)
/// constant matrix maps to mid-gray.
pub fn rescale_minmax(m: &Matrix) -> Matrix {
    let min = m.data().iter().cloned().fold(f64::INFINITY, f64::min);
    let max = m.data().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max - min <= 1e-12 {
        return m.map(|_| 0.5);
    }
    m.map(|v| (v - min) / (max - min))
}

/// Writes the matrix as little-endian f64 values behind an 8-byte header
/// (rows and cols as little-endian u32).
pub fn write_raw(m: &Matrix, path: impl AsRef<Path>) -> Result<(), CliError> {
    let path = path.as_ref();
    let mut buf = Vec::with_capacity(8 + m.data().len() * 8);
    buf.write_all(&(m.rows() as u32).to_le_bytes()).expect("in-memory write");
    buf.write_all(&(m.cols() as u32).to_le_bytes()).expect("in-memory write");
    for &v in m.data() {
        buf.write_all(&v.to_le_bytes()).expect("in-memory write");
    }
    std::fs::write(path, buf)
        .map_err(|e| CliError::runtime(format!("failed to write {}: {e}", path.display())))
}
