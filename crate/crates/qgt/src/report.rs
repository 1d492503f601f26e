//! Multi-trace comparison: aligned final-gap tables, fitted log-slopes, and
//! a dependency-free SVG line chart with a log y-axis.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::trace::{TraceData, TraceError, TraceRow};

/// Gaps at or below zero are clamped to this floor before taking log10.
pub const PLOT_GAP_FLOOR: f64 = 1e-16;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("comparison needs at least 2 traces, got {0}")]
    TooFewTraces(usize),
    #[error("stride grids differ: {0}")]
    GridMismatch(String),
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareRow {
    pub name: String,
    pub final_gap: f64,
    /// Least-squares slope of log10(gap) per iteration over the final half.
    pub log_slope: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub rows: Vec<CompareRow>,
}

impl CompareReport {
    /// Fixed-width text table for terminal output.
    pub fn to_table(&self) -> String {
        let name_width = self
            .rows
            .iter()
            .map(|r| r.name.len())
            .max()
            .unwrap_or(4)
            .max(5);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<name_width$}  {:>13}  {:>13}",
            "trace", "final_gap", "log10_slope"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<name_width$}  {:>13.6e}  {:>13.6e}",
                r.name, r.final_gap, r.log_slope
            );
        }
        out
    }
}

/// Least-squares slope of `log10(max(gap, floor))` against `k` over the
/// final half of the rows. Returns 0 for fewer than two points.
pub fn fit_log_slope(rows: &[TraceRow]) -> f64 {
    let half = &rows[rows.len() / 2..];
    if half.len() < 2 {
        return 0.0;
    }
    let pts: Vec<(f64, f64)> = half
        .iter()
        .map(|r| (r.k as f64, r.gap.max(PLOT_GAP_FLOOR).log10()))
        .collect();
    let n = pts.len() as f64;
    let mean_x = pts.iter().map(|(x, _)| x).sum::<f64>() / n;
    let mean_y = pts.iter().map(|(_, y)| y).sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var = 0.0;
    for (x, y) in &pts {
        cov += (x - mean_x) * (y - mean_y);
        var += (x - mean_x) * (x - mean_x);
    }
    if var == 0.0 {
        0.0
    } else {
        cov / var
    }
}

/// Builds the aligned comparison; every trace must sit on the identical
/// iteration grid.
pub fn compare(traces: &[TraceData]) -> Result<CompareReport, ReportError> {
    if traces.len() < 2 {
        return Err(ReportError::TooFewTraces(traces.len()));
    }
    let reference: Vec<u64> = traces[0].rows.iter().map(|r| r.k).collect();
    for t in &traces[1..] {
        let grid: Vec<u64> = t.rows.iter().map(|r| r.k).collect();
        if grid != reference {
            return Err(ReportError::GridMismatch(format!(
                "`{}` has {} rows ending at k={:?}, `{}` has {} rows ending at k={:?}",
                traces[0].name,
                reference.len(),
                reference.last(),
                t.name,
                grid.len(),
                grid.last()
            )));
        }
    }
    let rows = traces
        .iter()
        .map(|t| CompareRow {
            name: t.name.clone(),
            final_gap: t.final_gap(),
            log_slope: fit_log_slope(&t.rows),
        })
        .collect();
    Ok(CompareReport { rows })
}

/// Reads trace CSVs and produces the comparison plus a combined SVG.
pub fn compare_files(paths: &[&Path], svg_out: &Path) -> Result<CompareReport, ReportError> {
    if paths.len() < 2 {
        return Err(ReportError::TooFewTraces(paths.len()));
    }
    let traces: Vec<TraceData> = paths
        .iter()
        .map(|p| TraceData::read_csv(p))
        .collect::<Result<_, _>>()?;
    let report = compare(&traces)?;
    std::fs::write(svg_out, render_svg(&traces))?;
    Ok(report)
}

const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 520.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 20.0;
const MARGIN_B: f64 = 50.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

/// Minimal hand-rolled chart: linear iteration axis, log10 gap axis with
/// decade ticks, one polyline per trace, legend in the top-right corner.
pub fn render_svg(traces: &[TraceData]) -> String {
    let mut k_max = 1.0f64;
    let mut log_min = f64::INFINITY;
    let mut log_max = f64::NEG_INFINITY;
    for t in traces {
        for r in &t.rows {
            k_max = k_max.max(r.k as f64);
            let lg = r.gap.max(PLOT_GAP_FLOOR).log10();
            log_min = log_min.min(lg);
            log_max = log_max.max(lg);
        }
    }
    if !log_min.is_finite() || !log_max.is_finite() {
        log_min = -1.0;
        log_max = 1.0;
    }
    let lo = log_min.floor();
    let mut hi = log_max.ceil();
    if hi <= lo {
        hi = lo + 1.0;
    }
    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
    let x_of = |k: f64| MARGIN_L + k / k_max * plot_w;
    let y_of = |lg: f64| MARGIN_T + (hi - lg) / (hi - lo) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );

    // Axes.
    let x0 = MARGIN_L;
    let y0 = MARGIN_T + plot_h;
    let _ = writeln!(
        svg,
        r#"<line x1="{x0}" y1="{y0}" x2="{:.2}" y2="{y0}" stroke="black"/>"#,
        MARGIN_L + plot_w
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{x0}" y1="{MARGIN_T}" x2="{x0}" y2="{y0}" stroke="black"/>"#
    );

    // Decade ticks on the log axis (at most ~12 labeled).
    let decades = (hi - lo) as i64;
    let tick_step = ((decades as f64 / 12.0).ceil() as i64).max(1);
    let mut d = lo as i64;
    while d <= hi as i64 {
        let y = y_of(d as f64);
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{x0}" y2="{y:.2}" stroke="black"/>"#,
            x0 - 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="end">1e{d}</text>"#,
            x0 - 8.0,
            y + 4.0
        );
        let _ = writeln!(
            svg,
            r##"<line x1="{x0}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/>"##,
            MARGIN_L + plot_w
        );
        d += tick_step;
    }

    // Iteration ticks.
    for i in 0..=5 {
        let k = k_max * i as f64 / 5.0;
        let x = x_of(k);
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.2}" y1="{y0}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#,
            y0 + 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{x:.2}" y="{:.2}" font-size="12" text-anchor="middle">{}</text>"#,
            y0 + 20.0,
            k.round() as u64
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-size="13" text-anchor="middle">iteration k</text>"#,
        MARGIN_L + plot_w / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{:.2}" font-size="13" text-anchor="middle" transform="rotate(-90 16 {:.2})">optimality gap</text>"#,
        MARGIN_T + plot_h / 2.0,
        MARGIN_T + plot_h / 2.0
    );

    // Curves.
    for (idx, t) in traces.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let mut points = String::new();
        for r in &t.rows {
            let _ = write!(
                points,
                "{:.2},{:.2} ",
                x_of(r.k as f64),
                y_of(r.gap.max(PLOT_GAP_FLOOR).log10())
            );
        }
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            points.trim_end()
        );
    }

    // Legend.
    for (idx, t) in traces.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let y = MARGIN_T + 16.0 + idx as f64 * 18.0;
        let x = MARGIN_L + plot_w - 240.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{color}" stroke-width="2"/>"#,
            x + 28.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-size="12">{}</text>"#,
            x + 34.0,
            y + 4.0,
            xml_escape(&t.name)
        );
    }

    svg.push_str("</svg>\n");
    svg
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
