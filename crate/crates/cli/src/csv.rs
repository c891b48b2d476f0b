//! CSV output: per-iteration traces and checkpoint SNR tables.

use std::fmt::Write as _;
use std::path::Path;

use fbsplit_core::imaging::write_atomic;

use crate::error::{CliError, CliResult};

pub const TRACE_HEADER: &str = "iter,snr_db,objective,residual_m_norm,elapsed_s";

/// One line of a trace file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub iter: usize,
    /// `NaN` when no reference image was supplied.
    pub snr_db: f64,
    pub objective: f64,
    pub residual_m_norm: f64,
    pub elapsed_s: f64,
}

/// Nine significant digits, positional notation for moderate magnitudes and
/// scientific otherwise. Non-finite values print as `inf`, `-inf` or `nan`.
pub fn format_sig9(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.8e}");
    let exp: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .expect("rust scientific format has an exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

pub fn render_trace(rows: &[TraceRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.iter,
            format_sig9(r.snr_db),
            format_sig9(r.objective),
            format_sig9(r.residual_m_norm),
            format_sig9(r.elapsed_s)
        )
        .expect("writing to a String");
    }
    out
}

/// Writes `rows` under the fixed trace header, LF line endings.
pub fn write_trace_csv(rows: &[TraceRow], path: &Path) -> CliResult<()> {
    if rows.is_empty() {
        return Err(CliError::usage("refusing to write a trace with no rows"));
    }
    write_atomic(path, render_trace(rows).as_bytes()).map_err(|e| CliError::from(e).with_path(path))
}

/// Parses a file produced by [`render_trace`].
pub fn parse_trace_csv(text: &str) -> CliResult<Vec<TraceRow>> {
    let mut lines = text.lines();
    if lines.next() != Some(TRACE_HEADER) {
        return Err(CliError::Io("trace header mismatch".into()));
    }
    let num = |s: &str| -> CliResult<f64> {
        s.parse::<f64>()
            .map_err(|_| CliError::Io(format!("bad number `{s}` in trace")))
    };
    lines
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 5 {
                return Err(CliError::Io(format!(
                    "trace row has {} fields: `{line}`",
                    f.len()
                )));
            }
            Ok(TraceRow {
                iter: f[0]
                    .parse()
                    .map_err(|_| CliError::Io(format!("bad iteration `{}`", f[0])))?,
                snr_db: num(f[1])?,
                objective: num(f[2])?,
                residual_m_norm: num(f[3])?,
                elapsed_s: num(f[4])?,
            })
        })
        .collect()
}

/// Checkpoint table: `iter,<alg1>,<alg2>,…` with one SNR column per algorithm.
pub fn render_snr_table(names: &[&str], checkpoints: &[usize], columns: &[Vec<f64>]) -> String {
    let mut out = String::from("iter");
    for n in names {
        out.push(',');
        out.push_str(n);
    }
    out.push('\n');
    for (row, cp) in checkpoints.iter().enumerate() {
        out.push_str(&cp.to_string());
        for col in columns {
            out.push(',');
            out.push_str(&format_sig9(col[row]));
        }
        out.push('\n');
    }
    out
}
