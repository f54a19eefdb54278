//! Trace export with a fixed header and 17-significant-digit floats, so runs
//! are byte-reproducible and scripts can rely on the layout.

use crate::error::CliError;
use oger_core::solver::IterationTrace;
use std::fmt::Write as _;
use std::path::Path;

pub const TRACE_HEADER: &str = "iter,lagrangian,re,psnr,snr,dx,dw,derr,de,df,dmu1,dmu2,dmu3";

/// 17 significant digits; infinities spelled out.
pub fn format_float(v: f64) -> String {
    if v.is_infinite() {
        return if v > 0.0 { "inf".to_string() } else { "-inf".to_string() };
    }
    format!("{v:.16e}")
}

fn format_optional(v: Option<f64>) -> String {
    v.map(format_float).unwrap_or_default()
}

pub fn render_trace_csv(traces: &[IterationTrace]) -> String {
    let mut out = String::with_capacity(64 + traces.len() * 256);
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for t in traces {
        let d = &t.diff_norms;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            t.iteration,
            format_float(t.lagrangian),
            format_float(t.re),
            format_optional(t.psnr),
            format_optional(t.snr),
            format_float(d.x),
            format_float(d.w),
            format_float(d.err),
            format_float(d.e_aux),
            format_float(d.f_omega),
            format_float(d.mu1),
            format_float(d.mu2),
            format_float(d.mu3),
        )
        .expect("in-memory write");
    }
    out
}

pub fn write_trace_csv(path: impl AsRef<Path>, traces: &[IterationTrace]) -> Result<(), CliError> {
    let path = path.as_ref();
    std::fs::write(path, render_trace_csv(traces))
        .map_err(|e| CliError::runtime(format!("failed to write {}: {e}", path.display())))
}
