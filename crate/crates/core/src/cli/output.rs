//! CSV traces, metadata sidecars and atomic file writes.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use crate::numerics::{NORMAL_TRANSFORM, RNG_ALGORITHM};
use crate::solver::Trace;

use super::CliError;

pub const TRACE_HEADER: &str = "iter,objective,distance,step_size,subgrad_norm";
pub const SUMMARY_HEADER: &str = "axis_value,status,final_distance,fitted_q,iters";

/// Label of every iteration budget this harness picks on its own.
pub const BUDGET_LABEL: &str = "desk-scale (chosen by this harness)";

/// 17 significant digits.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// One row per recorded iterate; distances divided by `scale`.
pub fn trace_csv(trace: &Trace, scale: f64) -> String {
    let mut out = String::with_capacity(96 * (trace.records.len() + 1));
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for r in &trace.records {
        let distance = r
            .distance
            .map(|d| fmt_float(d / scale))
            .unwrap_or_else(|| "NA".into());
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.iter,
            fmt_float(r.objective),
            distance,
            fmt_float(r.step_size),
            fmt_float(r.subgrad_norm)
        );
    }
    out
}

/// Sidecar describing how a trace was produced.
pub fn meta_text(config_text: &str, trace: &Trace, scale: f64) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "rng = {RNG_ALGORITHM}");
    let _ = writeln!(out, "normal = {NORMAL_TRANSFORM}");
    let _ = writeln!(out, "budget = {BUDGET_LABEL}");
    let _ = writeln!(out, "distance_scale = {}", fmt_float(scale));
    let _ = writeln!(out, "status = {}", trace.status.as_str());
    let _ = writeln!(out, "iterations = {}", trace.iterations());
    let _ = writeln!(out, "clamped_steps = {}", trace.clamped_steps);
    out.push_str("# config\n");
    for line in config_text.lines() {
        let _ = writeln!(out, "# {line}");
    }
    out
}

pub fn meta_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta");
    PathBuf::from(s)
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub axis_value: String,
    pub status: String,
    pub final_distance: Option<f64>,
    pub fitted_q: Option<f64>,
    pub iters: Option<usize>,
}

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let na = || "NA".to_string();
    let mut out = format!("{SUMMARY_HEADER}\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.axis_value,
            r.status,
            r.final_distance.map(fmt_float).unwrap_or_else(na),
            r.fitted_q.map(fmt_float).unwrap_or_else(na),
            r.iters.map(|i| i.to_string()).unwrap_or_else(na)
        );
    }
    out
}
