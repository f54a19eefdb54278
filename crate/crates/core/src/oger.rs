//! Overlapping group error representation (OGER): a convex structured-sparsity
//! penalty on the approximation-error component, plus the
//! majorization-minimization proximal solver for its block update.
//!
//! The penalty is `phi(E) = sum_{(i,j)} ||E_{(i,j),K}||_2`, the sum over every
//! matrix index of the Euclidean norm of the K x K window anchored there.
//! Windows are anchored at every index and out-of-range positions contribute
//! zero. With `K = 1` the penalty reduces to the entrywise L1 norm.

use crate::matrix::Matrix;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OgerError {
    #[error("group center ({row}, {col}) outside a {rows}x{cols} matrix")]
    CenterOutOfRange { row: usize, col: usize, rows: usize, cols: usize },
    #[error("group size K must be at least 1")]
    InvalidGroupSize,
    #[error("epsilon guard must be positive, got {0}")]
    InvalidEpsilon(f64),
}

/// Group geometry for the overlapping K x K windows.
///
/// A window anchored at `(i, j)` spans rows `i - left_radius ..= i + right_radius`
/// and the same column range, where `left_radius = floor((K-1)/2)` and
/// `right_radius = floor(K/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OgerParams {
    group_size: usize,
    left_radius: usize,
    right_radius: usize,
    epsilon: f64,
}

impl OgerParams {
    pub fn new(group_size: usize) -> Result<Self, OgerError> {
        Self::with_epsilon(group_size, 1e-12)
    }

    pub fn with_epsilon(group_size: usize, epsilon: f64) -> Result<Self, OgerError> {
        if group_size == 0 {
            return Err(OgerError::InvalidGroupSize);
        }
        if !(epsilon > 0.0) {
            return Err(OgerError::InvalidEpsilon(epsilon));
        }
        Ok(Self {
            group_size,
            left_radius: (group_size - 1) / 2,
            right_radius: group_size / 2,
            epsilon,
        })
    }

    pub fn group_size(&self) -> usize {
        self.group_size
    }

    pub fn left_radius(&self) -> usize {
        self.left_radius
    }

    pub fn right_radius(&self) -> usize {
        self.right_radius
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

impl Default for OgerParams {
    fn default() -> Self {
        Self::new(3).unwrap()
    }
}

/// Inner-loop settings for [`mm_prox`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MmProxConfig {
    /// Number of MM sweeps (weight refreshes).
    pub inner_iterations: usize,
    /// Penalty weight on the group term.
    pub lam: f64,
    /// Quadratic coupling weight.
    pub rho: f64,
}

impl MmProxConfig {
    pub fn new(inner_iterations: usize, lam: f64, rho: f64) -> Self {
        assert!(inner_iterations >= 1, "at least one MM sweep is required");
        assert!(lam >= 0.0, "lam must be non-negative");
        assert!(rho > 0.0, "rho must be positive");
        Self { inner_iterations, lam, rho }
    }
}

/// Extracts the K x K window anchored at `(i, j)`, zero-padded at the border.
pub fn group_at(e: &Matrix, i: usize, j: usize, params: &OgerParams) -> Result<Matrix, OgerError> {
    let (rows, cols) = e.shape();
    if i >= rows || j >= cols {
        return Err(OgerError::CenterOutOfRange { row: i, col: j, rows, cols });
    }
    let k = params.group_size;
    let n1 = params.left_radius as isize;
    let mut out = Matrix::zeros(k, k);
    for di in 0..k {
        for dj in 0..k {
            let r = i as isize - n1 + di as isize;
            let c = j as isize - n1 + dj as isize;
            if r >= 0 && c >= 0 && (r as usize) < rows && (c as usize) < cols {
                out.set(di, dj, e.get(r as usize, c as usize));
            }
        }
    }
    Ok(out)
}

/// Euclidean norm of every window, computed by direct window summation so
/// exactly-zero groups stay exactly zero.
fn group_norms(e: &Matrix, params: &OgerParams) -> Matrix {
    let (rows, cols) = e.shape();
    let n1 = params.left_radius as isize;
    let n2 = params.right_radius as isize;
    Matrix::from_fn(rows, cols, |i, j| {
        let mut sum_sq = 0.0;
        let r_lo = (i as isize - n1).max(0) as usize;
        let r_hi = ((i as isize + n2) as usize).min(rows - 1);
        let c_lo = (j as isize - n1).max(0) as usize;
        let c_hi = ((j as isize + n2) as usize).min(cols - 1);
        for r in r_lo..=r_hi {
            for c in c_lo..=c_hi {
                let v = e.get(r, c);
                sum_sq += v * v;
            }
        }
        sum_sq.sqrt()
    })
}

/// The group penalty `phi(e)`: sum of the Euclidean norms of all windows.
pub fn oger_value(e: &Matrix, params: &OgerParams) -> f64 {
    group_norms(e, params).data().iter().sum()
}

/// Per-pixel MM weights: `lambda(l) = sqrt(sum over groups containing l of
/// 1 / max(||group||_2, epsilon))`.
///
/// The groups containing pixel `l` are those anchored at `l + offset` for
/// offsets in `[-right_radius ..= left_radius]^2`; anchors falling outside the
/// matrix are skipped. Group norms are floored at `epsilon` before inversion.
pub fn lambda_diagonal(e: &Matrix, params: &OgerParams) -> Matrix {
    let norms = group_norms(e, params);
    lambda_from_norms(&norms, params).map(|v| v.sqrt())
}

/// Squared weights from precomputed group norms; shared with [`mm_prox`] so the
/// inner loop reuses one norm pass per sweep.
fn lambda_from_norms(norms: &Matrix, params: &OgerParams) -> Matrix {
    let (rows, cols) = norms.shape();
    let n1 = params.left_radius as isize;
    let n2 = params.right_radius as isize;
    let eps = params.epsilon;
    Matrix::from_fn(rows, cols, |i, j| {
        let a_lo = (i as isize - n2).max(0) as usize;
        let a_hi = ((i as isize + n1) as usize).min(rows - 1);
        let b_lo = (j as isize - n2).max(0) as usize;
        let b_hi = ((j as isize + n1) as usize).min(cols - 1);
        let mut sum = 0.0;
        for a in a_lo..=a_hi {
            for b in b_lo..=b_hi {
                sum += 1.0 / norms.get(a, b).max(eps);
            }
        }
        sum
    })
}

/// Approximate minimizer of `J(E) = lam * phi(E) + rho/2 ||E - D||_F^2` after
/// `inner_iterations` MM sweeps.
///
/// Each sweep refreshes the per-pixel weights from the current iterate and
/// applies the elementwise update `E_l = D_l / (1 + (lam/rho) * lambda(l)^2)`,
/// which minimizes the mean-inequality surrogate of the group penalty and
/// never increases `J`.
pub fn mm_prox(d: &Matrix, warm_start: &Matrix, params: &OgerParams, cfg: &MmProxConfig) -> Matrix {
    assert!(d.same_shape(warm_start), "D and warm start must share a shape");
    if cfg.lam == 0.0 {
        return d.clone();
    }
    let ratio = cfg.lam / cfg.rho;
    let mut e = warm_start.clone();
    for _ in 0..cfg.inner_iterations {
        let norms = group_norms(&e, params);
        let lambda_sq = lambda_from_norms(&norms, params);
        e = Matrix::from_fn(d.rows(), d.cols(), |i, j| {
            d.get(i, j) / (1.0 + ratio * lambda_sq.get(i, j))
        });
    }
    e
}

/// The objective the MM loop descends on. Exposed for diagnostics.
pub fn mm_objective(e: &Matrix, d: &Matrix, params: &OgerParams, cfg: &MmProxConfig) -> f64 {
    cfg.lam * oger_value(e, params) + 0.5 * cfg.rho * e.sub(d).frobenius_norm_sq()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0))
    }

    /// Independent double-loop evaluation of the group penalty.
    fn naive_oger_value(e: &Matrix, params: &OgerParams) -> f64 {
        let mut total = 0.0;
        for i in 0..e.rows() {
            for j in 0..e.cols() {
                let group = group_at(e, i, j, params).unwrap();
                total += group.frobenius_norm();
            }
        }
        total
    }

    #[test]
    fn params_radii_partition_group_size() {
        for k in 1..=8 {
            let p = OgerParams::new(k).unwrap();
            assert_eq!(p.left_radius() + p.right_radius() + 1, k);
        }
        assert!(matches!(OgerParams::new(0), Err(OgerError::InvalidGroupSize)));
    }

    #[test]
    fn group_at_zero_pads_borders() {
        let e = Matrix::new(1, 1, vec![5.0]).unwrap();
        let params = OgerParams::new(3).unwrap();
        let g = group_at(&e, 0, 0, &params).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expected = if (i, j) == (1, 1) { 5.0 } else { 0.0 };
                assert_eq!(g.get(i, j), expected);
            }
        }
    }

    #[test]
    fn group_at_k1_is_single_entry() {
        let e = Matrix::new(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let params = OgerParams::new(1).unwrap();
        let g = group_at(&e, 1, 0, &params).unwrap();
        assert_eq!(g.shape(), (1, 1));
        assert_eq!(g.get(0, 0), 3.0);
    }

    #[test]
    fn group_at_interior_of_ones() {
        let e = Matrix::from_fn(3, 3, |_, _| 1.0);
        let params = OgerParams::new(3).unwrap();
        let g = group_at(&e, 1, 1, &params).unwrap();
        assert!(g.data().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn group_at_rejects_out_of_range_center() {
        let e = Matrix::zeros(2, 2);
        let params = OgerParams::new(3).unwrap();
        assert!(matches!(
            group_at(&e, 2, 0, &params),
            Err(OgerError::CenterOutOfRange { .. })
        ));
    }

    #[test]
    fn value_with_k1_is_entrywise_l1() {
        let e = Matrix::new(2, 2, vec![1.0, -2.0, 0.0, 3.0]).unwrap();
        let params = OgerParams::new(1).unwrap();
        assert_eq!(oger_value(&e, &params), 6.0);
    }

    #[test]
    fn value_of_centered_spike() {
        let mut e = Matrix::zeros(3, 3);
        e.set(1, 1, -2.5);
        let params = OgerParams::new(3).unwrap();
        assert!((oger_value(&e, &params) - 9.0 * 2.5).abs() < 1e-12);
    }

    #[test]
    fn value_of_zero_matrix_is_zero() {
        for k in [1, 2, 3, 5] {
            let params = OgerParams::new(k).unwrap();
            assert_eq!(oger_value(&Matrix::zeros(4, 6), &params), 0.0);
        }
    }

    #[test]
    fn value_matches_naive_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for k in [1, 2, 3, 5] {
            let params = OgerParams::new(k).unwrap();
            for _ in 0..10 {
                let e = random_matrix(&mut rng, 8, 8);
                let fast = oger_value(&e, &params);
                let naive = naive_oger_value(&e, &params);
                assert!((fast - naive).abs() <= 1e-10, "K={k}: {fast} vs {naive}");
            }
        }
    }

    #[test]
    fn value_is_positively_homogeneous() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let params = OgerParams::new(3).unwrap();
        for _ in 0..20 {
            let e = random_matrix(&mut rng, 6, 6);
            let c = rng.random_range(-3.0..3.0);
            let lhs = oger_value(&e.scale(c), &params);
            let rhs = c.abs() * oger_value(&e, &params);
            assert!((lhs - rhs).abs() <= 1e-10 * rhs.max(1.0));
        }
    }

    #[test]
    fn value_is_convex() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for k in [1, 2, 3, 5] {
            let params = OgerParams::new(k).unwrap();
            for _ in 0..50 {
                let e1 = random_matrix(&mut rng, 6, 7);
                let e2 = random_matrix(&mut rng, 6, 7);
                let theta: f64 = rng.random_range(0.0..1.0);
                let mix = e1.scale(theta).add(&e2.scale(1.0 - theta));
                let lhs = oger_value(&mix, &params);
                let rhs =
                    theta * oger_value(&e1, &params) + (1.0 - theta) * oger_value(&e2, &params);
                assert!(lhs <= rhs + 1e-12, "K={k}: {lhs} > {rhs}");
            }
        }
    }

    #[test]
    fn lambda_of_centered_spike() {
        let mut e = Matrix::zeros(3, 3);
        e.set(1, 1, 0.7);
        let params = OgerParams::new(3).unwrap();
        let lam = lambda_diagonal(&e, &params);
        let at_spike = lam.get(1, 1);
        assert!((at_spike * at_spike - 9.0 / 0.7).abs() < 1e-10);
    }

    #[test]
    fn lambda_with_k1_is_reciprocal_sqrt() {
        let e = Matrix::new(2, 2, vec![0.5, 1.0, 2.0, 4.0]).unwrap();
        let params = OgerParams::new(1).unwrap();
        let lam = lambda_diagonal(&e, &params);
        for i in 0..2 {
            for j in 0..2 {
                let expected = 1.0 / e.get(i, j).abs().sqrt();
                assert!((lam.get(i, j) - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn lambda_of_zero_matrix_uses_guard() {
        let params = OgerParams::new(3).unwrap();
        let lam = lambda_diagonal(&Matrix::zeros(4, 4), &params);
        // Interior pixel: all 9 containing groups exist; corner pixel: 4.
        let expect = |count: f64| (count / params.epsilon()).sqrt();
        assert!((lam.get(1, 1) - expect(9.0)).abs() < expect(9.0) * 1e-12);
        assert!((lam.get(0, 0) - expect(4.0)).abs() < expect(4.0) * 1e-12);
    }

    #[test]
    fn mm_prox_with_zero_lam_returns_d() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let d = random_matrix(&mut rng, 5, 5);
        let warm = random_matrix(&mut rng, 5, 5);
        let params = OgerParams::new(3).unwrap();
        let cfg = MmProxConfig::new(4, 0.0, 1.0);
        assert_eq!(mm_prox(&d, &warm, &params, &cfg), d);
    }

    #[test]
    fn mm_prox_fixed_point_at_zero() {
        let params = OgerParams::new(3).unwrap();
        let cfg = MmProxConfig::new(5, 1.0, 1.0);
        let zero = Matrix::zeros(4, 4);
        let out = mm_prox(&zero, &zero, &params, &cfg);
        assert_eq!(out, zero);
    }

    #[test]
    fn mm_prox_improves_objective() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let params = OgerParams::new(3).unwrap();
        let cfg = MmProxConfig::new(5, 1.0, 1.0);
        // Entries large enough that the minimizer shrinks partially rather
        // than collapsing to zero.
        let d = random_matrix(&mut rng, 8, 8).scale(12.0);
        let out = mm_prox(&d, &d, &params, &cfg);
        let at_out = mm_objective(&out, &d, &params, &cfg);
        assert!(at_out <= mm_objective(&d, &d, &params, &cfg));
        assert!(at_out <= mm_objective(&Matrix::zeros(8, 8), &d, &params, &cfg));
    }

    #[test]
    fn mm_sweeps_never_increase_objective() {
        let mut rng = ChaCha8Rng::seed_from_u64(39);
        let params = OgerParams::new(3).unwrap();
        for _ in 0..25 {
            let d = random_matrix(&mut rng, 7, 7);
            let warm = random_matrix(&mut rng, 7, 7);
            let lam = rng.random_range(0.05..2.0);
            let rho = rng.random_range(0.2..2.0);
            let mut prev = warm.clone();
            let mut prev_obj =
                mm_objective(&prev, &d, &params, &MmProxConfig::new(1, lam, rho));
            for _ in 0..6 {
                let cfg = MmProxConfig::new(1, lam, rho);
                let next = mm_prox(&d, &prev, &params, &cfg);
                let next_obj = mm_objective(&next, &d, &params, &cfg);
                assert!(next_obj <= prev_obj + 1e-10, "{next_obj} > {prev_obj}");
                prev = next;
                prev_obj = next_obj;
            }
        }
    }

    /// Mean-inequality surrogate built from the public API only.
    fn surrogate_upper_bound(
        e: &Matrix,
        v: &Matrix,
        d: &Matrix,
        params: &OgerParams,
        lam: f64,
        rho: f64,
    ) -> f64 {
        let mut s = 0.0;
        for i in 0..e.rows() {
            for j in 0..e.cols() {
                let eg = group_at(e, i, j, params).unwrap().frobenius_norm_sq();
                let vg = group_at(v, i, j, params).unwrap().frobenius_norm().max(params.epsilon());
                s += eg / (2.0 * vg) + vg / 2.0;
            }
        }
        lam * s + 0.5 * rho * e.sub(d).frobenius_norm_sq()
    }

    #[test]
    fn surrogate_majorizes_and_touches() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let params = OgerParams::new(3).unwrap();
        for _ in 0..10 {
            // Offsets keep every group norm comfortably above the guard.
            let e = random_matrix(&mut rng, 6, 6).map(|x| x + 2.0);
            let v = random_matrix(&mut rng, 6, 6).map(|x| x + 2.0);
            let d = random_matrix(&mut rng, 6, 6);
            let (lam, rho) = (0.8, 1.3);
            let cfg = MmProxConfig::new(1, lam, rho);
            let j_e = mm_objective(&e, &d, &params, &cfg);
            assert!(surrogate_upper_bound(&e, &v, &d, &params, lam, rho) >= j_e - 1e-9);
            let j_v = mm_objective(&v, &d, &params, &cfg);
            let touched = surrogate_upper_bound(&v, &v, &d, &params, lam, rho);
            assert!((touched - j_v).abs() <= 1e-9 * j_v.abs().max(1.0));
        }
    }
}
