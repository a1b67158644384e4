//! Output plumbing: JSON report envelopes and CSV scans.
//!
//! Every report embeds the fully resolved model config and the command
//! parameters, so a run can be reproduced from its output alone. The
//! `timestamp_ms` field is the only part that varies between identical
//! runs.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use qc1d_core::spectral::SpectralScan;

use crate::model::ModelConfig;
use crate::CliError;

#[derive(Serialize)]
pub struct Report<'a, P: Serialize, R: Serialize> {
    pub command: &'a str,
    pub timestamp_ms: u128,
    pub config: &'a ModelConfig,
    pub params: P,
    pub results: R,
}

pub fn now_ms() -> u128 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Numeric(format!("serialization failed: {e}")))?;
    std::fs::write(path, text + "\n")
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}

/// Fixed-format scan CSV: `E,trace,in_band,lyapunov,ids`, one row per grid
/// point. `f64` Display is shortest-round-trip, so identical runs produce
/// byte-identical files.
pub fn write_scan_csv(path: &Path, scan: &SpectralScan) -> Result<(), CliError> {
    let mut out = std::io::BufWriter::new(
        std::fs::File::create(path)
            .map_err(|e| CliError::Config(format!("cannot create {}: {e}", path.display())))?,
    );
    let io_err = |e: std::io::Error| CliError::Config(format!("write failed: {e}"));
    writeln!(out, "E,trace,in_band,lyapunov,ids").map_err(io_err)?;
    for row in &scan.rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            row.e,
            row.trace,
            u8::from(row.in_band),
            row.lyapunov,
            row.ids
        )
        .map_err(io_err)?;
    }
    Ok(())
}

