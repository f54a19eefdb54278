//! Low-rank matrix completion with an overlapping group error representation.
//!
//! The recovered matrix is modeled as a low-rank component plus a structured
//! error component. The low-rank part is promoted through a configurable rank
//! surrogate (nuclear, Schatten-p, weighted, or capped variants), the error
//! part through a convex overlapping group penalty, and the two are fit to the
//! observed entries by an ADMM loop whose block updates are all closed-form.
//!
//! Modules:
//! - [`matrix`]: dense matrices, observation masks, SVD, masked algebra.
//! - [`surrogate`]: rank surrogate values and singular-value shrinkage.
//! - [`oger`]: the overlapping group penalty and its MM proximal solver.
//! - [`solver`]: the ADMM iteration, stopping rule, and diagnostics.
//! - [`mask`]: random/block/image-file degradation masks.
//! - [`metrics`]: PSNR, SNR, and best rank-k truncation.
//! - [`pgm`]: binary PGM (P5) image I/O.

pub mod mask;
pub mod matrix;
pub mod metrics;
pub mod oger;
pub mod pgm;
pub mod solver;
pub mod surrogate;

pub use mask::{make_mask, sampling_rate, BlockRect, MaskError, MaskSpec};
pub use matrix::{blend, restrict, svd, Matrix, MatrixError, ObservationMask, SvdResult};
pub use metrics::{psnr, snr, truncate_rank, MetricsError};
pub use oger::{
    group_at, lambda_diagonal, mm_prox, oger_value, MmProxConfig, OgerError, OgerParams,
};
pub use pgm::{read_pgm, write_pgm, PgmError, PgmImage};
pub use solver::{
    init_state, lagrangian_value, solve, solve_with_state, stationarity_report, step, DiffNorms,
    IterationTrace, SolverConfig, SolverError, SolverState, StationarityReport,
};
pub use surrogate::{
    prox_surrogate, shrink_scalar_capped_p, shrink_scalar_p, shrink_scalar_soft, surrogate_value,
    RankSurrogate, ScalarShrinkProblem, SurrogateError,
};
