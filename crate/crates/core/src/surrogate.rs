//! Rank surrogate value functions and the singular-value shrinkage proximal
//! operator that solves the low-rank block update.
//!
//! The spectral prox `min_W lam * sum_i psi(sigma_i(W)) + rho/2 ||W - D||_F^2`
//! keeps the singular vectors of `D` and shrinks each singular value through a
//! one-dimensional problem, so everything here reduces to scalar solvers.

use crate::matrix::{svd, Matrix, MatrixError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SurrogateError {
    #[error("{kind} needs at least {needed} weights, got {got}")]
    WeightsTooShort { kind: &'static str, needed: usize, got: usize },
    #[error("singular values must be non-negative and sorted descending")]
    NonDescendingInput,
    #[error("weighted nuclear shrinkage requires non-descending weights")]
    DescendingWeights,
    #[error("scale parameter p must lie in (0, 1], got {0}")]
    InvalidP(f64),
    #[error("threshold tau must be positive, got {0}")]
    InvalidTau(f64),
    #[error("weights must be non-negative")]
    NegativeWeight,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Tractable stand-in for the rank function, evaluated on singular values.
#[derive(Debug, Clone, PartialEq)]
pub enum RankSurrogate {
    /// Sum of singular values.
    Nuclear,
    /// `(sum_i sigma_i^p)^(1/p)` with `0 < p <= 1`.
    SchattenP { p: f64 },
    /// `sum_i w_i * sigma_i` with caller-supplied non-negative weights.
    WeightedNuclear { weights: Vec<f64> },
    /// `(sum_i w_i * sigma_i^p)^(1/p)`.
    WeightedSchattenP { p: f64, weights: Vec<f64> },
    /// `(sum_i min(sigma_i, tau)^p)^(1/p)`: flat beyond `tau`, so large
    /// singular values escape shrinkage entirely.
    SchattenCappedP { p: f64, tau: f64 },
}

impl RankSurrogate {
    pub fn validate(&self) -> Result<(), SurrogateError> {
        let check_p = |p: f64| {
            if p > 0.0 && p <= 1.0 {
                Ok(())
            } else {
                Err(SurrogateError::InvalidP(p))
            }
        };
        let check_weights = |w: &[f64]| {
            if w.iter().any(|&x| x < 0.0 || !x.is_finite()) {
                Err(SurrogateError::NegativeWeight)
            } else {
                Ok(())
            }
        };
        match self {
            RankSurrogate::Nuclear => Ok(()),
            RankSurrogate::SchattenP { p } => check_p(*p),
            RankSurrogate::WeightedNuclear { weights } => check_weights(weights),
            RankSurrogate::WeightedSchattenP { p, weights } => {
                check_p(*p)?;
                check_weights(weights)
            }
            RankSurrogate::SchattenCappedP { p, tau } => {
                check_p(*p)?;
                if *tau > 0.0 {
                    Ok(())
                } else {
                    Err(SurrogateError::InvalidTau(*tau))
                }
            }
        }
    }
}

/// One scalar shrinkage instance: `min_{sigma >= 0} lam * psi(sigma) + rho/2 (sigma - s)^2`.
#[derive(Debug, Clone, Copy)]
pub struct ScalarShrinkProblem {
    /// Input singular value, `s >= 0`.
    pub s: f64,
    /// Effective penalty weight (`alpha` or `alpha * w_i`).
    pub lam: f64,
    /// Quadratic coupling weight, `rho > 0`.
    pub rho: f64,
}

fn require_sorted(values: &[f64]) -> Result<(), SurrogateError> {
    let sorted = values.windows(2).all(|w| w[0] >= w[1]) && values.iter().all(|&v| v >= 0.0);
    if sorted {
        Ok(())
    } else {
        Err(SurrogateError::NonDescendingInput)
    }
}

fn require_weights(
    kind: &'static str,
    weights: &[f64],
    needed: usize,
) -> Result<(), SurrogateError> {
    if weights.len() < needed {
        Err(SurrogateError::WeightsTooShort { kind, needed, got: weights.len() })
    } else {
        Ok(())
    }
}

/// Evaluates the surrogate on a descending list of singular values.
pub fn surrogate_value(r: &RankSurrogate, singular_values: &[f64]) -> Result<f64, SurrogateError> {
    require_sorted(singular_values)?;
    let n = singular_values.len();
    match r {
        RankSurrogate::Nuclear => Ok(singular_values.iter().sum()),
        RankSurrogate::SchattenP { p } => {
            let sum: f64 = singular_values.iter().map(|&s| s.powf(*p)).sum();
            Ok(sum.powf(1.0 / p))
        }
        RankSurrogate::WeightedNuclear { weights } => {
            require_weights("weighted nuclear", weights, n)?;
            Ok(singular_values.iter().zip(weights).map(|(&s, &w)| w * s).sum())
        }
        RankSurrogate::WeightedSchattenP { p, weights } => {
            require_weights("weighted schatten-p", weights, n)?;
            let sum: f64 =
                singular_values.iter().zip(weights).map(|(&s, &w)| w * s.powf(*p)).sum();
            Ok(sum.powf(1.0 / p))
        }
        RankSurrogate::SchattenCappedP { p, tau } => {
            let sum: f64 = singular_values.iter().map(|&s| s.min(*tau).powf(*p)).sum();
            Ok(sum.powf(1.0 / p))
        }
    }
}

/// Exact minimizer of `lam * sigma + rho/2 (sigma - s)^2` over `sigma >= 0`.
pub fn shrink_scalar_soft(prob: ScalarShrinkProblem) -> f64 {
    (prob.s - prob.lam / prob.rho).max(0.0)
}

/// Global minimizer of `lam * sigma^p + rho/2 (sigma - s)^2` over `sigma >= 0`
/// for `0 < p <= 1` (generalized soft thresholding).
///
/// Below the threshold the solution is exactly zero; above it, the nonzero
/// stationary point is found by fixed-point iteration started at `s`, which
/// stays in the basin where the map contracts with rate at most `p/2`.
pub fn shrink_scalar_p(prob: ScalarShrinkProblem, p: f64) -> f64 {
    assert!(p > 0.0 && p <= 1.0, "p must lie in (0, 1]");
    if p == 1.0 {
        return shrink_scalar_soft(prob);
    }
    if prob.lam <= 0.0 {
        return prob.s.max(0.0);
    }
    if prob.s <= 0.0 {
        return 0.0;
    }
    let lam_eff = prob.lam / prob.rho;
    let base = 2.0 * lam_eff * (1.0 - p);
    let threshold = base.powf(1.0 / (2.0 - p)) + lam_eff * p * base.powf((p - 1.0) / (2.0 - p));
    if prob.s <= threshold {
        return 0.0;
    }
    let mut sigma = prob.s;
    for _ in 0..50 {
        let next = prob.s - lam_eff * p * sigma.powf(p - 1.0);
        if !next.is_finite() || next <= 0.0 {
            return 0.0;
        }
        let delta = (next - sigma).abs();
        sigma = next;
        if delta < 1e-12 {
            break;
        }
    }
    sigma
}

fn capped_objective(sigma: f64, prob: ScalarShrinkProblem, p: f64, tau: f64) -> f64 {
    prob.lam * sigma.min(tau).powf(p) + 0.5 * prob.rho * (sigma - prob.s) * (sigma - prob.s)
}

/// Global minimizer of `lam * min(sigma, tau)^p + rho/2 (sigma - s)^2` over
/// `sigma >= 0`.
///
/// The objective is piecewise: quadratic-plus-power below `tau` and a pure
/// shifted quadratic above. Its local minima are the zero point, the
/// p-shrinkage point clamped to `[0, tau]`, and `max(s, tau)` on the flat
/// branch; the global solution is whichever evaluates lowest.
pub fn shrink_scalar_capped_p(prob: ScalarShrinkProblem, p: f64, tau: f64) -> f64 {
    assert!(p > 0.0 && p <= 1.0, "p must lie in (0, 1]");
    assert!(tau > 0.0, "tau must be positive");
    let candidates = [
        0.0,
        shrink_scalar_p(prob, p).min(tau),
        prob.s.max(tau),
    ];
    let mut best = candidates[0];
    let mut best_obj = capped_objective(best, prob, p, tau);
    for &c in &candidates[1..] {
        let obj = capped_objective(c, prob, p, tau);
        if obj < best_obj {
            best = c;
            best_obj = obj;
        }
    }
    best
}

fn shrink_values(
    r: &RankSurrogate,
    values: &[f64],
    alpha: f64,
    rho: f64,
) -> Result<Vec<f64>, SurrogateError> {
    let n = values.len();
    let prob = |s: f64, lam: f64| ScalarShrinkProblem { s, lam, rho };
    match r {
        RankSurrogate::Nuclear => {
            Ok(values.iter().map(|&s| shrink_scalar_soft(prob(s, alpha))).collect())
        }
        RankSurrogate::SchattenP { p } => {
            Ok(values.iter().map(|&s| shrink_scalar_p(prob(s, alpha), *p)).collect())
        }
        RankSurrogate::WeightedNuclear { weights } => {
            require_weights("weighted nuclear", weights, n)?;
            // The order-preserving closed form needs non-descending weights.
            if weights[..n].windows(2).any(|w| w[0] > w[1]) {
                return Err(SurrogateError::DescendingWeights);
            }
            Ok(values
                .iter()
                .zip(weights)
                .map(|(&s, &w)| shrink_scalar_soft(prob(s, alpha * w)))
                .collect())
        }
        RankSurrogate::WeightedSchattenP { p, weights } => {
            require_weights("weighted schatten-p", weights, n)?;
            Ok(values
                .iter()
                .zip(weights)
                .map(|(&s, &w)| shrink_scalar_p(prob(s, alpha * w), *p))
                .collect())
        }
        RankSurrogate::SchattenCappedP { p, tau } => {
            Ok(values.iter().map(|&s| shrink_scalar_capped_p(prob(s, alpha), *p, *tau)).collect())
        }
    }
}

/// Spectral proximal step: shrinks the singular values of `d` through the
/// surrogate's scalar solver while keeping its singular vectors.
///
/// Arbitrary weights can leave the shrunk values unsorted, in which case they
/// are re-sorted descending with the matching singular vector permutation.
pub fn prox_surrogate(
    r: &RankSurrogate,
    d: &Matrix,
    alpha: f64,
    rho: f64,
) -> Result<Matrix, SurrogateError> {
    assert!(alpha >= 0.0, "alpha must be non-negative");
    assert!(rho > 0.0, "rho must be positive");
    r.validate()?;
    if alpha == 0.0 {
        return Ok(d.clone());
    }
    let decomp = svd(d)?;
    let mut shrunk = shrink_values(r, &decomp.singular_values, alpha, rho)?;
    if shrunk.windows(2).any(|w| w[0] < w[1]) {
        let r_len = shrunk.len();
        let mut order: Vec<usize> = (0..r_len).collect();
        order.sort_by(|&a, &b| shrunk[b].partial_cmp(&shrunk[a]).unwrap());
        let values: Vec<f64> = order.iter().map(|&k| shrunk[k]).collect();
        let u = Matrix::from_fn(decomp.u.rows(), r_len, |i, k| decomp.u.get(i, order[k]));
        let vt = Matrix::from_fn(r_len, decomp.vt.cols(), |k, j| decomp.vt.get(order[k], j));
        shrunk = values;
        let permuted = crate::matrix::SvdResult { u, singular_values: shrunk, vt };
        return Ok(permuted.reconstruct());
    }
    Ok(decomp.reconstruct_with(&shrunk))
}
