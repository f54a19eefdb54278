//! Command-line surface.

use crate::config::RawSettings;
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "oger",
    version,
    about = "Low-rank matrix completion with an overlapping group error representation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Degrade an image with a mask and recover it with the ADMM solver
    Complete(CompleteArgs),
    /// Write rank-k truncations of an image plus the truncation-error table
    Decompose(DecomposeArgs),
    /// Generate a mask image (255 = missing, 0 = observed)
    Maskgen(MaskgenArgs),
    /// Print PSNR and SNR between two images
    Metrics(MetricsArgs),
}

#[derive(Debug, Args)]
pub struct CompleteArgs {
    /// key=value config file; flags override its entries
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Input image (binary PGM, maxval 255)
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Directory for recovered.pgm, degraded.pgm, error_component.*, trace.csv
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
    /// Reference image for PSNR/SNR columns
    #[arg(long)]
    pub ground_truth: Option<PathBuf>,
    /// Mask kind: random, blocks, or image
    #[arg(long)]
    pub mask: Option<String>,
    /// Missing fraction for random masks
    #[arg(long)]
    pub eta: Option<f64>,
    /// Seed for random masks
    #[arg(long)]
    pub seed: Option<u64>,
    /// Rectangles row,col,height,width separated by ';'
    #[arg(long)]
    pub blocks: Option<String>,
    /// Mask image path (nonzero = missing)
    #[arg(long)]
    pub mask_image: Option<PathBuf>,
    /// nuclear, schatten_p, weighted_nuclear, weighted_schatten_p, schatten_capped_p
    #[arg(long)]
    pub surrogate: Option<String>,
    /// Rank surrogate weight
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Group error penalty weight
    #[arg(long)]
    pub lambda: Option<f64>,
    /// ADMM penalty parameter
    #[arg(long)]
    pub rho: Option<f64>,
    /// Group size for the error penalty
    #[arg(long)]
    pub k: Option<usize>,
    /// MM sweeps per outer iteration
    #[arg(long)]
    pub inner_n: Option<usize>,
    /// Relative-change stopping tolerance
    #[arg(long)]
    pub tol: Option<f64>,
    /// Iteration cap
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Scale parameter for the Schatten-type surrogates
    #[arg(long)]
    pub p: Option<f64>,
    /// Cap for schatten_capped_p
    #[arg(long)]
    pub tau: Option<f64>,
    /// Comma-separated weights for the weighted surrogates
    #[arg(long)]
    pub weights: Option<String>,
}

impl CompleteArgs {
    pub fn into_settings(self) -> (Option<PathBuf>, RawSettings) {
        let settings = RawSettings {
            input: self.input,
            output_dir: self.output_dir,
            ground_truth: self.ground_truth,
            mask: self.mask,
            eta: self.eta,
            seed: self.seed,
            blocks: self.blocks,
            mask_image: self.mask_image,
            surrogate: self.surrogate,
            alpha: self.alpha,
            lambda: self.lambda,
            rho: self.rho,
            k: self.k,
            inner_n: self.inner_n,
            tol: self.tol,
            max_iter: self.max_iter,
            p: self.p,
            tau: self.tau,
            weights: self.weights,
        };
        (self.config, settings)
    }
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    /// Input image (binary PGM, maxval 255)
    #[arg(long)]
    pub input: PathBuf,
    /// Comma-separated truncation ranks, e.g. 10,20,50
    #[arg(long)]
    pub k_list: String,
    #[arg(long)]
    pub output_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct MaskgenArgs {
    #[arg(long)]
    pub rows: usize,
    #[arg(long)]
    pub cols: usize,
    /// Mask kind: random or blocks
    #[arg(long, default_value = "random")]
    pub mask: String,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub blocks: Option<String>,
    /// Output mask image path
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    /// Reference image
    #[arg(long)]
    pub reference: PathBuf,
    /// Image under evaluation
    #[arg(long)]
    pub estimate: PathBuf,
}
