//! Shared fixtures for the integration and acceptance suites.

use oger_core::matrix::Matrix;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0))
}

/// Exactly rank-`rank` matrix with entries scaled into [-1, 1].
pub fn low_rank_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, rank: usize) -> Matrix {
    let left = Matrix::from_fn(rows, rank, |_, _| rng.random_range(-1.0..1.0));
    let right = Matrix::from_fn(cols, rank, |_, _| rng.random_range(-1.0..1.0));
    let prod = left.matmul(&right.transpose());
    let maxabs = prod.data().iter().fold(0.0_f64, |a, &v| a.max(v.abs()));
    prod.scale(1.0 / maxabs)
}

/// Deterministic grayscale test scene: a smooth low-rank background with a
/// plateau, a disk, a diagonal band, and mild texture. Stands in for the
/// natural test images, which are not redistributable.
pub fn synth_natural_image(rows: usize, cols: usize) -> Matrix {
    use std::f64::consts::PI;
    Matrix::from_fn(rows, cols, |i, j| {
        let u = i as f64 / rows as f64;
        let v = j as f64 / cols as f64;
        let mut val = 0.45
            + 0.25 * (PI * u).sin() * (PI * v).sin()
            + 0.12 * (3.0 * PI * u).cos()
            + 0.08 * (2.0 * PI * v).cos();
        if u > 0.15 && u < 0.45 && v > 0.55 && v < 0.9 {
            val += 0.25;
        }
        let (du, dv) = (u - 0.65, v - 0.3);
        if du * du + dv * dv < 0.02 {
            val -= 0.3;
        }
        if (u + v - 0.9).abs() < 0.03 {
            val += 0.2;
        }
        val += 0.02 * ((17.0 * u).sin() * (23.0 * v).sin());
        val.clamp(0.0, 1.0)
    })
}
