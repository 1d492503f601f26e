//! Experiment configuration files and end-to-end runs.
//!
//! A config is one TOML file with flat sections (`[cost]`, `[graph]`,
//! `[schedule]`, `[nonlinearity]`, `[step]`, `[output]`). Every field is
//! validated before anything runs; failures name the offending field. A run
//! derives all sub-seeds from the single top-level `seed`, computes the
//! centralized oracle once, drives the engine, and writes `<name>.csv` plus
//! `<name>.svg` into the output directory.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::costs::{AcademicCost, AcademicParams, CostError, CostModel, LogisticCost};
use crate::dataio::{load_idx, select_and_partition, DataError};
use crate::engine::{self, EngineError, RunConfig, RunError, StepConfig};
use crate::graph::{
    GraphError, GraphSpec, ScheduledTopology, SpectrumError, SwitchMode, SwitchingSchedule,
    TopologyProvider,
};
use crate::oracle::{self, OracleResult};
use crate::quantize::{LinkNonlinearity, QuantizeError};
use crate::report::render_svg;
use crate::seed::derive_seed;
use crate::trace::{ExperimentTrace, TraceData, TraceError};

/// Environment variable overriding the configured output directory.
pub const OUT_DIR_ENV: &str = "QGT_OUT_DIR";

/// Realized topologies sampled when bounding the step size for a switching
/// schedule (the schedule's topology set is unbounded under reweighting).
pub const ALPHA_SAMPLE_EPOCHS: u64 = 16;

const ACADEMIC_ORACLE_MAX_ITER: u64 = 500_000;
const LOGISTIC_ORACLE_MAX_ITER: u64 = 50_000;

// Sub-seed streams.
const STREAM_GRAPH: u64 = 1;
const STREAM_COST: u64 = 2;
const STREAM_INIT: u64 = 3;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("cannot read config `{path}`: {source}")]
    ReadConfig {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("config `{path}` is not valid TOML: {message}")]
    ParseConfig { path: PathBuf, message: String },
    #[error("invalid config: {}", .0.join("; "))]
    Invalid(Vec<String>),
    #[error("run `{name}` aborted: {source}")]
    Run {
        name: String,
        #[source]
        source: EngineError,
        /// Partial trace CSV written before the abort, when one could be saved.
        partial_csv: Option<PathBuf>,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Cost(#[from] CostError),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Quantize(#[from] QuantizeError),
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn default_stride() -> u64 {
    10
}

fn default_scale() -> f64 {
    0.5
}

fn default_safety() -> f64 {
    0.5
}

fn default_lambda() -> f64 {
    0.01
}

fn default_components() -> usize {
    1
}

fn default_amplitude() -> f64 {
    10.0
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub seed: u64,
    pub iterations: u64,
    #[serde(default = "default_stride")]
    pub stride: u64,
    pub gap_tol: Option<f64>,
    pub cost: CostSection,
    pub graph: GraphSection,
    #[serde(default)]
    pub schedule: ScheduleSection,
    pub nonlinearity: NonlinearitySection,
    #[serde(default)]
    pub step: StepSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CostSection {
    /// `academic` or `mnist`.
    pub kind: String,
    pub nodes: usize,
    #[serde(default = "default_components")]
    pub components: usize,
    #[serde(default = "default_amplitude")]
    pub amplitude: f64,
    pub images: Option<PathBuf>,
    pub labels: Option<PathBuf>,
    pub digits: Option<[u8; 2]>,
    pub total: Option<usize>,
    #[serde(default = "default_lambda")]
    pub lambda: f64,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GraphSection {
    /// `exponential`, `geometric`, or `er`.
    pub kind: String,
    pub nodes: usize,
    pub radius: Option<f64>,
    pub p: Option<f64>,
    #[serde(default = "default_scale")]
    pub scale: f64,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ScheduleSection {
    /// Iterations between switches; omit for a static topology.
    pub period: Option<u64>,
    #[serde(default)]
    pub mode: ScheduleMode,
    /// Give the tracker matrix B its own weight draw instead of B = A.
    #[serde(default)]
    pub independent_b: bool,
}

impl Default for ScheduleSection {
    fn default() -> Self {
        Self {
            period: None,
            mode: ScheduleMode::Reweight,
            independent_b: false,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleMode {
    #[default]
    Reweight,
    Resample,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct NonlinearitySection {
    /// `log`, `uniform`, or `none`.
    pub kind: String,
    pub rho: Option<f64>,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct StepSection {
    /// Explicit step size; omit to auto-size from the admissible bound.
    pub alpha: Option<f64>,
    #[serde(default = "default_safety")]
    pub safety: f64,
}

impl Default for StepSection {
    fn default() -> Self {
        Self {
            alpha: None,
            safety: default_safety(),
        }
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_out_dir")]
    pub dir: PathBuf,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            dir: default_out_dir(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str, origin: &Path) -> Result<Self, ExperimentError> {
        let cfg: Self = toml::from_str(text).map_err(|e| ExperimentError::ParseConfig {
            path: origin.to_path_buf(),
            message: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ExperimentError> {
        let text = std::fs::read_to_string(path).map_err(|source| ExperimentError::ReadConfig {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text, path)
    }

    /// Field-level validation of everything that can be checked before
    /// touching the filesystem or running anything.
    pub fn validate(&self) -> Result<(), ExperimentError> {
        let mut errors = Vec::new();
        let mut fail = |msg: String| errors.push(msg);

        if self.name.is_empty()
            || !self
                .name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
        {
            fail(format!(
                "name: must be a nonempty filename-safe token, got `{}`",
                self.name
            ));
        }
        if self.stride == 0 {
            fail("stride: must be at least 1".into());
        }
        if let Some(tol) = self.gap_tol {
            if !(tol.is_finite() && tol > 0.0) {
                fail(format!("gap_tol: must be positive, got {tol}"));
            }
        }

        match self.cost.kind.as_str() {
            "academic" => {
                if self.cost.nodes * self.cost.components < 2 {
                    fail("cost.nodes * cost.components: need at least 2 entries".into());
                }
                if !(self.cost.amplitude.is_finite() && self.cost.amplitude > 0.1) {
                    fail(format!(
                        "cost.amplitude: must exceed the 0.1 dead band, got {}",
                        self.cost.amplitude
                    ));
                }
                for (field, set) in [
                    ("images", self.cost.images.is_some()),
                    ("labels", self.cost.labels.is_some()),
                    ("digits", self.cost.digits.is_some()),
                    ("total", self.cost.total.is_some()),
                ] {
                    if set {
                        fail(format!("cost.{field}: only valid for kind = \"mnist\""));
                    }
                }
            }
            "mnist" => {
                if self.cost.images.is_none() {
                    fail("cost.images: required for kind = \"mnist\"".into());
                }
                if self.cost.labels.is_none() {
                    fail("cost.labels: required for kind = \"mnist\"".into());
                }
                match self.cost.digits {
                    None => fail("cost.digits: required for kind = \"mnist\"".into()),
                    Some([d1, d2]) => {
                        if d1 == d2 || d1 > 9 || d2 > 9 {
                            fail(format!(
                                "cost.digits: need two distinct digits 0-9, got [{d1}, {d2}]"
                            ));
                        }
                    }
                }
                match self.cost.total {
                    None => fail("cost.total: required for kind = \"mnist\"".into()),
                    Some(total) => {
                        if total == 0 || self.cost.nodes == 0 || total % self.cost.nodes != 0 {
                            fail(format!(
                                "cost.total: {total} must be positive and divisible by {} nodes",
                                self.cost.nodes
                            ));
                        }
                    }
                }
                if !(self.cost.lambda.is_finite() && self.cost.lambda >= 0.0) {
                    fail(format!(
                        "cost.lambda: must be nonnegative, got {}",
                        self.cost.lambda
                    ));
                }
            }
            other => fail(format!(
                "cost.kind: expected `academic` or `mnist`, got `{other}`"
            )),
        }

        if self.cost.nodes != self.graph.nodes {
            fail(format!(
                "graph.nodes: {} must match cost.nodes {}",
                self.graph.nodes, self.cost.nodes
            ));
        }

        match self.graph.kind.as_str() {
            "exponential" => {
                if self.graph.nodes < 2 || !self.graph.nodes.is_power_of_two() {
                    fail(format!(
                        "graph.nodes: exponential graphs need a power of two >= 2, got {}",
                        self.graph.nodes
                    ));
                }
                if self.graph.radius.is_some() || self.graph.p.is_some() {
                    fail("graph.radius/graph.p: not valid for kind = \"exponential\"".into());
                }
            }
            "geometric" => {
                match self.graph.radius {
                    None => fail("graph.radius: required for kind = \"geometric\"".into()),
                    Some(r) => {
                        if !(r > 0.0 && r <= std::f64::consts::SQRT_2) {
                            fail(format!(
                                "graph.radius: must lie in (0, sqrt(2)], got {r}"
                            ));
                        }
                    }
                }
                if self.graph.p.is_some() {
                    fail("graph.p: only valid for kind = \"er\"".into());
                }
            }
            "er" => {
                match self.graph.p {
                    None => fail("graph.p: required for kind = \"er\"".into()),
                    Some(p) => {
                        if !(p > 0.0 && p <= 1.0) {
                            fail(format!("graph.p: must lie in (0, 1], got {p}"));
                        }
                    }
                }
                if self.graph.radius.is_some() {
                    fail("graph.radius: only valid for kind = \"geometric\"".into());
                }
            }
            other => fail(format!(
                "graph.kind: expected `exponential`, `geometric`, or `er`, got `{other}`"
            )),
        }
        if !(self.graph.scale > 0.0 && self.graph.scale < 1.0) {
            fail(format!(
                "graph.scale: must lie in (0, 1), got {}",
                self.graph.scale
            ));
        }

        if let Some(period) = self.schedule.period {
            if period == 0 {
                fail("schedule.period: must be at least 1".into());
            }
        }

        match self.nonlinearity.kind.as_str() {
            "none" => {
                if self.nonlinearity.rho.is_some() {
                    fail("nonlinearity.rho: not valid for kind = \"none\"".into());
                }
            }
            "log" | "uniform" => match self.nonlinearity.rho {
                None => fail(format!(
                    "nonlinearity.rho: required for kind = \"{}\"",
                    self.nonlinearity.kind
                )),
                Some(rho) => {
                    if !(rho.is_finite() && rho > 0.0) {
                        fail(format!("nonlinearity.rho: must be positive, got {rho}"));
                    }
                }
            },
            other => fail(format!(
                "nonlinearity.kind: expected `log`, `uniform`, or `none`, got `{other}`"
            )),
        }

        if let Some(alpha) = self.step.alpha {
            if !(alpha.is_finite() && alpha > 0.0) {
                fail(format!("step.alpha: must be positive, got {alpha}"));
            }
        }
        if !(self.step.safety > 0.0 && self.step.safety < 1.0) {
            fail(format!(
                "step.safety: must lie in (0, 1), got {}",
                self.step.safety
            ));
        }

        if errors.is_empty() {
            Ok(())
        } else {
            Err(ExperimentError::Invalid(errors))
        }
    }

    pub fn graph_spec(&self) -> GraphSpec {
        match self.graph.kind.as_str() {
            "exponential" => GraphSpec::Exponential { n: self.graph.nodes },
            "geometric" => GraphSpec::Geometric {
                n: self.graph.nodes,
                radius: self.graph.radius.expect("validated"),
            },
            "er" => GraphSpec::ErdosRenyi {
                n: self.graph.nodes,
                p: self.graph.p.expect("validated"),
            },
            other => unreachable!("validated graph kind `{other}`"),
        }
    }

    pub fn link_nonlinearity(&self) -> Result<LinkNonlinearity, QuantizeError> {
        match self.nonlinearity.kind.as_str() {
            "none" => Ok(LinkNonlinearity::identity()),
            "log" => LinkNonlinearity::log_scale(self.nonlinearity.rho.expect("validated")),
            "uniform" => LinkNonlinearity::uniform(self.nonlinearity.rho.expect("validated")),
            other => unreachable!("validated nonlinearity kind `{other}`"),
        }
    }
}

/// Everything resolved and ready to run.
pub struct Experiment {
    pub name: String,
    pub costs: Box<dyn CostModel>,
    pub nonlinearity: LinkNonlinearity,
    pub topology: ScheduledTopology,
    pub step: StepConfig,
    pub run_cfg: RunConfig,
    pub oracle: OracleResult,
}

fn build_costs(cfg: &ExperimentConfig) -> Result<Box<dyn CostModel>, ExperimentError> {
    let cost_seed = derive_seed(cfg.seed, STREAM_COST);
    match cfg.cost.kind.as_str() {
        "academic" => {
            let params = AcademicParams::generate(
                cfg.cost.nodes,
                cfg.cost.components,
                cost_seed,
                cfg.cost.amplitude,
            )?;
            Ok(Box::new(AcademicCost::new(params)))
        }
        "mnist" => {
            let ds = load_idx(
                cfg.cost.images.as_ref().expect("validated"),
                cfg.cost.labels.as_ref().expect("validated"),
            )?;
            let digits = cfg.cost.digits.expect("validated");
            let data = select_and_partition(
                &ds,
                (digits[0], digits[1]),
                cfg.cost.total.expect("validated"),
                cfg.cost.nodes,
                cost_seed,
                cfg.cost.lambda,
            )?;
            Ok(Box::new(LogisticCost::new(data)))
        }
        other => unreachable!("validated cost kind `{other}`"),
    }
}

/// Smallest algebraic connectivity over a seeded sample of realized
/// topologies (one epoch for static schedules).
fn sampled_min_lambda2(topology: &ScheduledTopology) -> Result<f64, ExperimentError> {
    let epochs = if topology.schedule().period.is_some() {
        ALPHA_SAMPLE_EPOCHS
    } else {
        1
    };
    let mut min_lambda2 = f64::INFINITY;
    for epoch in 0..epochs {
        let (a, b) = topology.epoch_pair(epoch)?;
        min_lambda2 = min_lambda2.min(crate::graph::spectrum_of(&a)?.lambda2_real_abs);
        min_lambda2 = min_lambda2.min(crate::graph::spectrum_of(&b)?.lambda2_real_abs);
    }
    Ok(min_lambda2)
}

/// Resolves costs, topology, oracle, and step size from a validated config.
pub fn assemble(cfg: &ExperimentConfig) -> Result<Experiment, ExperimentError> {
    cfg.validate()?;
    let costs = build_costs(cfg)?;
    let nonlinearity = cfg.link_nonlinearity()?;

    let schedule = match cfg.schedule.period {
        None => SwitchingSchedule::fixed(derive_seed(cfg.seed, STREAM_GRAPH)),
        Some(period) => SwitchingSchedule::every(
            period,
            match cfg.schedule.mode {
                ScheduleMode::Reweight => SwitchMode::ReweightOnly,
                ScheduleMode::Resample => SwitchMode::ResampleTopology,
            },
            derive_seed(cfg.seed, STREAM_GRAPH),
        )?,
    };
    let mut topology = ScheduledTopology::new(cfg.graph_spec(), cfg.graph.scale, schedule);
    if cfg.schedule.independent_b {
        topology = topology.with_independent_b();
    }

    let lambda2 = sampled_min_lambda2(&topology)?;
    let alpha_bar = engine::step_size_bound(
        lambda2,
        lambda2,
        costs.smoothness(),
        nonlinearity.sector_upper_or_one(),
    )?;
    let step = match cfg.step.alpha {
        Some(alpha) => StepConfig::fixed(alpha, alpha_bar)?,
        None => StepConfig::auto(alpha_bar, cfg.step.safety)?,
    };

    let (oracle_tol, oracle_max_iter) = match cfg.cost.kind.as_str() {
        "academic" => (oracle::ACADEMIC_TOL, ACADEMIC_ORACLE_MAX_ITER),
        _ => (oracle::LOGISTIC_TOL, LOGISTIC_ORACLE_MAX_ITER),
    };
    let oracle = oracle::solve_centralized(costs.as_ref(), oracle_tol, oracle_max_iter);

    let mut run_cfg = RunConfig::new(
        cfg.iterations,
        cfg.stride,
        derive_seed(cfg.seed, STREAM_INIT),
    );
    run_cfg.gap_tol = cfg.gap_tol;

    Ok(Experiment {
        name: cfg.name.clone(),
        costs,
        nonlinearity,
        topology,
        step,
        run_cfg,
        oracle,
    })
}

impl Experiment {
    /// Drives the engine to completion. The trace is returned on success;
    /// on divergence the error carries the partial trace.
    pub fn run(&mut self) -> Result<ExperimentTrace, RunError> {
        engine::run(
            &self.run_cfg,
            &self.step,
            &self.nonlinearity,
            self.costs.as_ref(),
            &mut self.topology as &mut dyn TopologyProvider,
            &self.oracle,
            &self.name,
        )
    }
}

/// Files written by a successful run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunArtifacts {
    pub csv_path: PathBuf,
    pub svg_path: PathBuf,
    pub trace: ExperimentTrace,
}

/// Output directory precedence: explicit override, then `QGT_OUT_DIR`, then
/// the config's `[output] dir`.
pub fn resolve_out_dir(cfg: &ExperimentConfig, explicit: Option<&Path>) -> PathBuf {
    if let Some(dir) = explicit {
        return dir.to_path_buf();
    }
    if let Ok(dir) = std::env::var(OUT_DIR_ENV) {
        if !dir.is_empty() {
            return PathBuf::from(dir);
        }
    }
    cfg.output.dir.clone()
}

/// Assembles and runs one experiment, writing `<name>.csv` and `<name>.svg`.
/// A divergence abort still writes the partial CSV before surfacing the
/// error.
pub fn run_experiment(
    cfg: &ExperimentConfig,
    out_dir_override: Option<&Path>,
) -> Result<RunArtifacts, ExperimentError> {
    let mut experiment = assemble(cfg)?;
    let out_dir = resolve_out_dir(cfg, out_dir_override);
    std::fs::create_dir_all(&out_dir)?;
    let csv_path = out_dir.join(format!("{}.csv", cfg.name));
    let svg_path = out_dir.join(format!("{}.svg", cfg.name));

    match experiment.run() {
        Ok(trace) => {
            trace.write_csv(&csv_path)?;
            let data = TraceData::from_csv(&trace.to_csv(), &cfg.name)?;
            std::fs::write(&svg_path, render_svg(&[data]))?;
            Ok(RunArtifacts {
                csv_path,
                svg_path,
                trace,
            })
        }
        Err(RunError { error, partial }) => {
            let partial_csv = partial.write_csv(&csv_path).ok().map(|()| csv_path);
            Err(ExperimentError::Run {
                name: cfg.name.clone(),
                source: error,
                partial_csv,
            })
        }
    }
}

/// Convenience wrapper: load a config file and run it.
pub fn run_experiment_file(
    path: &Path,
    out_dir_override: Option<&Path>,
) -> Result<RunArtifacts, ExperimentError> {
    let cfg = ExperimentConfig::load(path)?;
    run_experiment(&cfg, out_dir_override)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn academic_toml() -> String {
        r#"
name = "unit_academic"
seed = 7
iterations = 300
stride = 10

[cost]
kind = "academic"
nodes = 16

[graph]
kind = "exponential"
nodes = 16

[nonlinearity]
kind = "log"
rho = 0.0078125
"#
        .to_string()
    }

    #[test]
    fn minimal_academic_config_parses_with_defaults() {
        let cfg =
            ExperimentConfig::from_toml_str(&academic_toml(), Path::new("unit.toml")).unwrap();
        assert_eq!(cfg.stride, 10);
        assert_eq!(cfg.graph.scale, 0.5);
        assert_eq!(cfg.step.safety, 0.5);
        assert_eq!(cfg.schedule.period, None);
        assert_eq!(cfg.cost.components, 1);
        assert_eq!(cfg.cost.amplitude, 10.0);
    }

    #[test]
    fn validation_reports_field_level_messages() {
        let bad = r#"
name = "bad config!"
seed = 1
iterations = 10

[cost]
kind = "academic"
nodes = 16
total = 100

[graph]
kind = "er"
nodes = 12
radius = 0.3

[nonlinearity]
kind = "log"
"#;
        let err = ExperimentConfig::from_toml_str(bad, Path::new("bad.toml")).unwrap_err();
        let text = err.to_string();
        assert!(text.contains("name:"), "{text}");
        assert!(text.contains("cost.total"), "{text}");
        assert!(text.contains("graph.p"), "{text}");
        assert!(text.contains("graph.radius"), "{text}");
        assert!(text.contains("graph.nodes"), "{text}");
        assert!(text.contains("nonlinearity.rho"), "{text}");
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let bad = academic_toml() + "\nbogus_field = 1\n";
        assert!(matches!(
            ExperimentConfig::from_toml_str(&bad, Path::new("x.toml")),
            Err(ExperimentError::ParseConfig { .. })
        ));
    }

    #[test]
    fn assembly_resolves_an_auto_step_below_the_bound() {
        let cfg =
            ExperimentConfig::from_toml_str(&academic_toml(), Path::new("unit.toml")).unwrap();
        let ex = assemble(&cfg).unwrap();
        assert!(ex.step.alpha > 0.0);
        assert!(ex.step.alpha < ex.step.alpha_bar);
        assert!(ex.oracle.converged);
        assert!(ex.oracle.f_star.abs() < 1e-9);
        // Exponential graph at scale 0.5 has lambda2 = 0.25; L <= 24.
        assert!(ex.step.alpha_bar >= 0.25 / (24.0 * 1.004));
    }

    #[test]
    fn run_experiment_writes_csv_and_svg() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg =
            ExperimentConfig::from_toml_str(&academic_toml(), Path::new("unit.toml")).unwrap();
        cfg.iterations = 100;
        let artifacts = run_experiment(&cfg, Some(dir.path())).unwrap();
        assert!(artifacts.csv_path.exists());
        assert!(artifacts.svg_path.exists());
        let csv = std::fs::read_to_string(&artifacts.csv_path).unwrap();
        assert!(csv.contains("# Fstar="));
        assert!(csv.contains("k,gap,"));
        // Byte-identical rerun.
        let again = run_experiment(&cfg, Some(dir.path())).unwrap();
        assert_eq!(
            std::fs::read(&artifacts.csv_path).unwrap(),
            std::fs::read(&again.csv_path).unwrap()
        );
    }

    #[test]
    fn missing_config_file_is_a_clean_error() {
        let err = run_experiment_file(Path::new("/nonexistent/qgt.toml"), None).unwrap_err();
        assert!(matches!(err, ExperimentError::ReadConfig { .. }));
    }
}
