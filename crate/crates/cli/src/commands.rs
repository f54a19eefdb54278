//! The four experiment subcommands.

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::imageio::{load_image, rescale_minmax, save_image, write_raw};
use crate::trace_csv::write_trace_csv;
use oger_core::mask::{make_mask, MaskSpec};
use oger_core::matrix::restrict;
use oger_core::metrics::{psnr, snr, truncate_rank};
use oger_core::pgm::{write_pgm, PgmImage};
use oger_core::solver::solve_with_state;
use oger_core::svd;
use std::path::Path;

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::runtime(format!("failed to create {}: {e}", dir.display())))
}

/// Degrades the input with the configured mask, runs the solver, and writes
/// the recovered image, the degraded input, both views of the error
/// component, and the per-iteration trace.
pub fn run_complete(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let y = load_image(&cfg.input_path)?;
    let mask = make_mask(&cfg.mask, y.rows(), y.cols())?;
    let ground_truth = match &cfg.ground_truth_path {
        Some(path) => Some(load_image(path)?),
        None => None,
    };

    ensure_dir(&cfg.output_dir)?;
    let degraded = restrict(&y, &mask)?;
    save_image(&degraded, cfg.output_dir.join("degraded.pgm"))?;

    let (state, traces) = solve_with_state(&y, &mask, &cfg.solver, ground_truth.as_ref())?;
    save_image(&state.recovered(), cfg.output_dir.join("recovered.pgm"))?;

    // The error component is signed: min-max view for display, raw dump for
    // lossless inspection.
    save_image(&rescale_minmax(&state.err), cfg.output_dir.join("error_component.pgm"))?;
    write_raw(&state.err, cfg.output_dir.join("error_component.raw"))?;

    write_trace_csv(cfg.output_dir.join("trace.csv"), &traces)?;

    let last = traces.last();
    let fmt_metric = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_default();
    println!(
        "final_psnr={} final_snr={} iters={}",
        fmt_metric(last.and_then(|t| t.psnr)),
        fmt_metric(last.and_then(|t| t.snr)),
        traces.len()
    );
    Ok(())
}

/// Writes rank-k truncations and residuals for each requested k, plus the
/// table checking the residual-energy identity.
pub fn run_decompose(input: &Path, k_list: &[usize], output_dir: &Path) -> Result<(), CliError> {
    let m = load_image(input)?;
    ensure_dir(output_dir)?;
    let sigma = svd(&m)?.singular_values;

    let mut csv = String::from("k,residual_fro_sq,sum_tail_sigma_sq\n");
    for &k in k_list {
        let (approx, residual) = truncate_rank(&m, k)?;
        save_image(&approx, output_dir.join(format!("lowrank_k{k}.pgm")))?;
        save_image(&rescale_minmax(&residual), output_dir.join(format!("residual_k{k}.pgm")))?;
        let tail: f64 = sigma[k.min(sigma.len())..].iter().map(|s| s * s).sum();
        csv.push_str(&format!(
            "{k},{},{}\n",
            crate::trace_csv::format_float(residual.frobenius_norm_sq()),
            crate::trace_csv::format_float(tail)
        ));
    }
    let csv_path = output_dir.join("truncation_errors.csv");
    std::fs::write(&csv_path, csv)
        .map_err(|e| CliError::runtime(format!("failed to write {}: {e}", csv_path.display())))?;
    Ok(())
}

/// Writes the mask as a P5 image: 255 marks missing entries, 0 observed ones.
pub fn run_maskgen(
    spec: &MaskSpec,
    rows: usize,
    cols: usize,
    output: &Path,
) -> Result<(), CliError> {
    let mask = make_mask(spec, rows, cols)?;
    let pixels = mask.flags().iter().map(|&obs| if obs { 0u8 } else { 255u8 }).collect();
    write_pgm(output, &PgmImage { rows, cols, pixels })?;
    Ok(())
}

/// Prints PSNR and SNR of `estimate` against `reference`.
pub fn run_metrics(reference: &Path, estimate: &Path) -> Result<(), CliError> {
    let r = load_image(reference)?;
    let e = load_image(estimate)?;
    println!("psnr={} snr={}", psnr(&r, &e)?, snr(&r, &e)?);
    Ok(())
}
