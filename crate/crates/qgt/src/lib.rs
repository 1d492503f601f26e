//! Deterministic simulator and library for first-order distributed
//! optimization with gradient tracking over weight-balanced digraphs, where
//! every inter-node message passes through a configurable link nonlinearity
//! (log-scale quantization, uniform quantization, or the identity).
//!
//! Module map:
//!
//! * [`graph`] — generators, weight assignment, Laplacian spectra, switching
//!   schedules;
//! * [`quantize`] — link nonlinearities with sector certificates;
//! * [`costs`] — academic non-convex benchmark and regularized logistic
//!   regression;
//! * [`engine`] — the lock-step consensus + gradient-tracking iteration;
//! * [`oracle`] — centralized reference minimizer for the gap metric;
//! * [`trace`] — per-iteration records and CSV emission;
//! * [`dataio`] — IDX ingestion and partitioning;
//! * [`experiment`] — config files and end-to-end runs;
//! * [`report`] — multi-trace comparison tables and SVG charts.

#![forbid(unsafe_code)]

pub mod costs;
pub mod dataio;
pub mod engine;
pub mod experiment;
pub mod graph;
pub mod oracle;
pub mod quantize;
pub mod report;
pub mod seed;
pub mod trace;

pub use costs::{AcademicCost, AcademicParams, CostModel, LogisticCost, LogisticData};
pub use engine::{gap_and_residuals, iterate, run, step_size_bound, StepConfig, SwarmState};
pub use graph::WeightedDigraph;
pub use quantize::LinkNonlinearity;
