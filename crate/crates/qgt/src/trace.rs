//! Per-iteration experiment records and their CSV form.
//!
//! The CSV schema is fixed: comment lines `# key=value` (oracle reference,
//! step sizes, run status), then the header
//! `k,gap,consensus_err,tracking_residual,alpha,epoch` and one row per
//! recorded iteration. Floats print in shortest round-trip form so reruns
//! reproduce files byte-for-byte.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

pub const CSV_HEADER: &str = "k,gap,consensus_err,tracking_residual,alpha,epoch";

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("trace parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("trace has no rows")]
    Empty,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub k: u64,
    pub gap: f64,
    pub consensus_err: f64,
    pub tracking_residual: f64,
    pub alpha: f64,
    pub epoch: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    /// Ran the full iteration budget.
    Completed,
    /// Stopped early because the gap tolerance was met.
    ToleranceReached,
}

impl std::fmt::Display for RunStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunStatus::Completed => write!(f, "completed"),
            RunStatus::ToleranceReached => write!(f, "tolerance_reached"),
        }
    }
}

/// Terminal summary of a run; embedded as CSV comments and printed by the CLI.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceSummary {
    pub status: RunStatus,
    pub iterations_run: u64,
    pub final_gap: f64,
    pub alpha: f64,
    pub alpha_bar: f64,
    pub f_star: f64,
    pub oracle_grad_norm: f64,
    pub oracle_converged: bool,
    /// Largest relative conservation residual seen across all iterations.
    pub max_conservation_residual: f64,
    /// Largest relative tracking residual seen for k >= 1.
    pub max_tracking_residual: f64,
    /// Quantizer exponent clamps encountered (log-scale diagnostics).
    pub clamped_messages: u64,
    /// Metric rows whose raw gap fell below the -1e-12 floor.
    pub floored_gap_rows: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentTrace {
    pub name: String,
    pub rows: Vec<TraceRow>,
    pub summary: TraceSummary,
}

impl ExperimentTrace {
    pub fn to_csv(&self) -> String {
        let s = &self.summary;
        let mut out = String::new();
        let _ = writeln!(out, "# name={}", self.name);
        let _ = writeln!(out, "# Fstar={}", s.f_star);
        let _ = writeln!(out, "# grad_norm={}", s.oracle_grad_norm);
        let _ = writeln!(out, "# oracle_converged={}", s.oracle_converged);
        let _ = writeln!(out, "# alpha={}", s.alpha);
        let _ = writeln!(out, "# alpha_bar={}", s.alpha_bar);
        let _ = writeln!(out, "# status={}", s.status);
        let _ = writeln!(out, "# max_conservation_residual={}", s.max_conservation_residual);
        let _ = writeln!(out, "# max_tracking_residual={}", s.max_tracking_residual);
        let _ = writeln!(out, "# clamped_messages={}", s.clamped_messages);
        let _ = writeln!(out, "# floored_gap_rows={}", s.floored_gap_rows);
        let _ = writeln!(out, "{CSV_HEADER}");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.k, r.gap, r.consensus_err, r.tracking_residual, r.alpha, r.epoch
            );
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<(), TraceError> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    /// The human-readable terminal block printed after a run.
    pub fn summary_block(&self) -> String {
        let s = &self.summary;
        let mut out = String::new();
        let _ = writeln!(out, "run        {}", self.name);
        let _ = writeln!(out, "status     {}", s.status);
        let _ = writeln!(out, "iterations {}", s.iterations_run);
        let _ = writeln!(out, "final_gap  {:e}", s.final_gap);
        let _ = writeln!(out, "alpha      {:e}", s.alpha);
        let _ = writeln!(out, "alpha_bar  {:e}", s.alpha_bar);
        let _ = writeln!(out, "Fstar      {:e}", s.f_star);
        out
    }
}

/// A trace read back from disk: rows plus whatever `# key=value` comments the
/// header carried. Reports consume this lighter form.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceData {
    pub name: String,
    pub rows: Vec<TraceRow>,
    pub header: Vec<(String, String)>,
}

impl TraceData {
    pub fn final_gap(&self) -> f64 {
        self.rows.last().map_or(f64::NAN, |r| r.gap)
    }

    pub fn header_value(&self, key: &str) -> Option<&str> {
        self.header
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn from_csv(text: &str, fallback_name: &str) -> Result<Self, TraceError> {
        let mut header = Vec::new();
        let mut rows = Vec::new();
        let mut saw_header = false;
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some((k, v)) = comment.trim().split_once('=') {
                    header.push((k.trim().to_string(), v.trim().to_string()));
                }
                continue;
            }
            if line == CSV_HEADER {
                saw_header = true;
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 6 {
                return Err(TraceError::Parse {
                    line: idx + 1,
                    reason: format!("expected 6 columns, got {}", fields.len()),
                });
            }
            let parse_f = |s: &str| -> Result<f64, TraceError> {
                let v: f64 = s.parse().map_err(|e| TraceError::Parse {
                    line: idx + 1,
                    reason: format!("bad float `{s}`: {e}"),
                })?;
                if v.is_nan() {
                    return Err(TraceError::Parse {
                        line: idx + 1,
                        reason: "non-finite value".into(),
                    });
                }
                Ok(v)
            };
            let parse_u = |s: &str| -> Result<u64, TraceError> {
                s.parse().map_err(|e| TraceError::Parse {
                    line: idx + 1,
                    reason: format!("bad integer `{s}`: {e}"),
                })
            };
            rows.push(TraceRow {
                k: parse_u(fields[0])?,
                gap: parse_f(fields[1])?,
                consensus_err: parse_f(fields[2])?,
                tracking_residual: parse_f(fields[3])?,
                alpha: parse_f(fields[4])?,
                epoch: parse_u(fields[5])?,
            });
        }
        if !saw_header || rows.is_empty() {
            return Err(TraceError::Empty);
        }
        let name = header
            .iter()
            .find(|(k, _)| k == "name")
            .map(|(_, v)| v.clone())
            .unwrap_or_else(|| fallback_name.to_string());
        Ok(Self { name, rows, header })
    }

    pub fn read_csv(path: &Path) -> Result<Self, TraceError> {
        let text = std::fs::read_to_string(path)?;
        let fallback = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "trace".into());
        Self::from_csv(&text, &fallback)
    }
}
