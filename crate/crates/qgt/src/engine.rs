//! The lock-step iteration: quantized consensus plus gradient tracking.
//!
//! One synchronous round per iteration. Every node reads its neighbors'
//! `h(x^k)` and `h(y^k)` messages from round k (double-buffered, never
//! in-place), updates the primal estimate, evaluates the local gradient at
//! the new estimate, and updates the tracker:
//!
//! ```text
//! x_i^{k+1} = x_i^k + sum_j a_ij (h(x_j^k) - h(x_i^k)) - alpha y_i^k
//! w_i^k     = grad f_i(x_i^{k+1}) - grad f_i(x_i^k)
//! y_i^{k+1} = y_i^k + sum_j b_ij (h(y_j^k) - h(y_i^k)) + w_i^k
//! ```
//!
//! Trackers start at zero with a zero gradient cache, so from the first
//! update onward `sum_i y_i^k = sum_i grad f_i(x_i^k)` — the tracking
//! identity — holds by telescoping, and weight balance makes the consensus
//! sums cancel for any odd link map. Both identities are re-checked every
//! iteration.

use ndarray::Array2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

use crate::costs::CostModel;
use crate::graph::{GraphError, TopologyProvider, WeightedDigraph};
use crate::oracle::OracleResult;
use crate::quantize::{LinkNonlinearity, QuantizeError};
use crate::trace::{ExperimentTrace, RunStatus, TraceRow, TraceSummary};

/// Coordinates beyond this magnitude abort the run as divergent.
pub const DIVERGENCE_LIMIT: f64 = 1e12;
/// Relative tolerance for the per-iteration sum-conservation identity.
pub const CONSERVATION_TOL: f64 = 1e-9;
/// Relative tolerance for the per-iteration tracking identity (k >= 1).
pub const TRACKING_TOL: f64 = 1e-9;
/// Raw gaps below this floor are clamped and flagged (oracle roundoff).
pub const GAP_FLOOR: f64 = -1e-12;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("step-size bound input `{name}` must be positive and finite, got {value}")]
    NonPositiveBoundInput { name: &'static str, value: f64 },
    #[error("invalid step configuration: {0}")]
    InvalidStep(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("diverged at iteration {k}: node {node} coordinate {coord} = {value:e}")]
    Diverged {
        k: u64,
        node: usize,
        coord: usize,
        value: f64,
    },
    #[error("{identity} identity violated at iteration {k}: residual {residual:e} > {tol:e}")]
    InvariantViolated {
        identity: &'static str,
        k: u64,
        residual: f64,
        tol: f64,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Quantize(#[from] QuantizeError),
}

/// A run failure carrying whatever trace rows were recorded before the abort.
#[derive(Debug, Error)]
#[error("{error}")]
pub struct RunError {
    #[source]
    pub error: EngineError,
    pub partial: Box<ExperimentTrace>,
}

/// Admissible step-size bound `min(|Re lambda2_A|, |Re lambda2_B|) / (L * K_upper)`.
pub fn step_size_bound(
    lambda2_a: f64,
    lambda2_b: f64,
    smoothness: f64,
    sector_upper: f64,
) -> Result<f64, EngineError> {
    for (name, value) in [
        ("lambda2_a", lambda2_a),
        ("lambda2_b", lambda2_b),
        ("smoothness", smoothness),
        ("sector_upper", sector_upper),
    ] {
        if !(value.is_finite() && value > 0.0) {
            return Err(EngineError::NonPositiveBoundInput { name, value });
        }
    }
    Ok(lambda2_a.min(lambda2_b) / (smoothness * sector_upper))
}

/// Resolved step size plus the bound it was sized against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepConfig {
    pub alpha: f64,
    pub alpha_bar: f64,
}

impl StepConfig {
    /// Auto-sizing: `alpha = safety * alpha_bar` with `safety` in (0, 1), so
    /// the step stays strictly inside the admissible range.
    pub fn auto(alpha_bar: f64, safety: f64) -> Result<Self, EngineError> {
        if !(alpha_bar.is_finite() && alpha_bar > 0.0) {
            return Err(EngineError::InvalidStep(format!(
                "alpha_bar must be positive, got {alpha_bar}"
            )));
        }
        if !(safety > 0.0 && safety < 1.0) {
            return Err(EngineError::InvalidStep(format!(
                "safety factor must lie in (0, 1), got {safety}"
            )));
        }
        Ok(Self {
            alpha: safety * alpha_bar,
            alpha_bar,
        })
    }

    /// Explicit step size; the bound is kept for reporting.
    pub fn fixed(alpha: f64, alpha_bar: f64) -> Result<Self, EngineError> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(EngineError::InvalidStep(format!(
                "alpha must be positive, got {alpha}"
            )));
        }
        Ok(Self { alpha, alpha_bar })
    }
}

/// All node states at one iteration: primal rows `x_i`, tracker rows `y_i`,
/// and the cached gradients `grad f_i(x_i^k)` the next difference will use.
#[derive(Debug, Clone, PartialEq)]
pub struct SwarmState {
    k: u64,
    x: Array2<f64>,
    y: Array2<f64>,
    grad_prev: Array2<f64>,
}

impl SwarmState {
    /// Fresh state at k = 0: trackers and gradient cache start at zero.
    pub fn from_initial(x0: Array2<f64>) -> Self {
        let dim = x0.raw_dim();
        Self {
            k: 0,
            x: x0,
            y: Array2::zeros(dim),
            grad_prev: Array2::zeros(dim),
        }
    }

    /// Seeded standard-normal initialization (row-major draw order).
    pub fn gaussian_init(nodes: usize, dim: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x0 = Array2::from_shape_fn((nodes, dim), |_| StandardNormal.sample(&mut rng));
        Self::from_initial(x0)
    }

    /// Mid-run state from explicit parts (tests and checkpoint tooling).
    pub fn from_parts(
        k: u64,
        x: Array2<f64>,
        y: Array2<f64>,
        grad_prev: Array2<f64>,
    ) -> Result<Self, EngineError> {
        if x.dim() != y.dim() || x.dim() != grad_prev.dim() {
            return Err(EngineError::DimensionMismatch(format!(
                "x {:?}, y {:?}, grad_prev {:?}",
                x.dim(),
                y.dim(),
                grad_prev.dim()
            )));
        }
        Ok(Self { k, x, y, grad_prev })
    }

    pub fn iteration(&self) -> u64 {
        self.k
    }

    pub fn nodes(&self) -> usize {
        self.x.nrows()
    }

    pub fn dim(&self) -> usize {
        self.x.ncols()
    }

    pub fn x(&self) -> &Array2<f64> {
        &self.x
    }

    pub fn y(&self) -> &Array2<f64> {
        &self.y
    }

    pub fn cached_gradients(&self) -> &Array2<f64> {
        &self.grad_prev
    }

    /// Node-average primal vector, summed in node order.
    pub fn mean_x(&self) -> Vec<f64> {
        column_means(&self.x)
    }
}

/// Per-iteration bookkeeping surfaced to the run loop.
#[derive(Debug, Clone, Copy, Default)]
pub struct IterateStats {
    /// Quantizer exponent clamps in this round's messages.
    pub clamped_messages: u64,
}

/// One synchronous round of the update. All messages come from round k.
pub fn iterate(
    state: &SwarmState,
    a_graph: &WeightedDigraph,
    b_graph: &WeightedDigraph,
    nonlinearity: &LinkNonlinearity,
    alpha: f64,
    costs: &dyn CostModel,
) -> Result<(SwarmState, IterateStats), EngineError> {
    let n = state.nodes();
    let p = state.dim();
    if a_graph.node_count() != n || b_graph.node_count() != n {
        return Err(EngineError::DimensionMismatch(format!(
            "state has {n} nodes, graphs have {} / {}",
            a_graph.node_count(),
            b_graph.node_count()
        )));
    }
    if costs.nodes() != n || costs.dim() != p {
        return Err(EngineError::DimensionMismatch(format!(
            "state is {n}x{p}, cost model is {}x{}",
            costs.nodes(),
            costs.dim()
        )));
    }
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(EngineError::InvalidStep(format!(
            "alpha must be positive, got {alpha}"
        )));
    }

    let mut stats = IterateStats::default();

    // Round-k messages: h applied once per node, reused by every receiver.
    let x_flat = state.x.as_slice().expect("row-major state");
    let y_flat = state.y.as_slice().expect("row-major state");
    let mut hx = vec![0.0; n * p];
    let mut hy = vec![0.0; n * p];
    for i in 0..n {
        let span = i * p..(i + 1) * p;
        stats.clamped_messages +=
            nonlinearity.apply_into(&x_flat[span.clone()], &mut hx[span.clone()])?;
        stats.clamped_messages += nonlinearity.apply_into(&y_flat[span.clone()], &mut hy[span])?;
    }

    // x^{k+1} = x^k + consensus(h(x^k)) - alpha y^k
    let mut x_next = vec![0.0; n * p];
    for i in 0..n * p {
        x_next[i] = x_flat[i] - alpha * y_flat[i];
    }
    for l in a_graph.links() {
        let (from, to, w) = (l.from * p, l.to * p, l.weight);
        for c in 0..p {
            x_next[to + c] += w * (hx[from + c] - hx[to + c]);
        }
    }

    // Gradients at x^{k+1}.
    let mut g_next = vec![0.0; n * p];
    for i in 0..n {
        costs.gradient(i, &x_next[i * p..(i + 1) * p], &mut g_next[i * p..(i + 1) * p]);
    }

    // y^{k+1} = y^k + consensus(h(y^k)) + (grad at x^{k+1} - cached grad)
    let grad_prev = state.grad_prev.as_slice().expect("row-major state");
    let mut y_next = vec![0.0; n * p];
    for i in 0..n * p {
        y_next[i] = y_flat[i] + g_next[i] - grad_prev[i];
    }
    for l in b_graph.links() {
        let (from, to, w) = (l.from * p, l.to * p, l.weight);
        for c in 0..p {
            y_next[to + c] += w * (hy[from + c] - hy[to + c]);
        }
    }

    let k_next = state.k + 1;
    for buf in [&x_next, &y_next] {
        for (idx, &v) in buf.iter().enumerate() {
            if !v.is_finite() || v.abs() > DIVERGENCE_LIMIT {
                return Err(EngineError::Diverged {
                    k: k_next,
                    node: idx / p,
                    coord: idx % p,
                    value: v,
                });
            }
        }
    }

    let next = SwarmState {
        k: k_next,
        x: Array2::from_shape_vec((n, p), x_next).expect("shape preserved"),
        y: Array2::from_shape_vec((n, p), y_next).expect("shape preserved"),
        grad_prev: Array2::from_shape_vec((n, p), g_next).expect("shape preserved"),
    };
    Ok((next, stats))
}

/// Metrics of one state: optimality gap at the node average, worst-node
/// consensus error, and the tracking residual recomputed from fresh
/// gradients (independent of the engine's cache).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricRecord {
    pub gap: f64,
    pub consensus_err: f64,
    pub tracking_residual: f64,
    pub gap_floored: bool,
}

pub fn gap_and_residuals(
    state: &SwarmState,
    costs: &dyn CostModel,
    f_star: f64,
) -> MetricRecord {
    let mean = state.mean_x();
    let raw_gap = costs.global_value(&mean) - f_star;
    let gap_floored = raw_gap < GAP_FLOOR;
    let gap = raw_gap.max(GAP_FLOOR);

    let p = state.dim();
    let mut consensus_err = 0.0f64;
    for i in 0..state.nodes() {
        let row = state.x.row(i);
        let dist: f64 = row
            .iter()
            .zip(&mean)
            .map(|(xi, m)| (xi - m) * (xi - m))
            .sum::<f64>()
            .sqrt();
        consensus_err = consensus_err.max(dist);
    }

    let mut grad = vec![0.0; p];
    let mut grad_sum = vec![0.0; p];
    for i in 0..state.nodes() {
        costs.gradient(i, state.x.row(i).as_slice().expect("row-major"), &mut grad);
        for (s, g) in grad_sum.iter_mut().zip(&grad) {
            *s += g;
        }
    }
    let y_sum = column_sums(&state.y);
    let tracking_residual = y_sum
        .iter()
        .zip(&grad_sum)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();

    MetricRecord {
        gap,
        consensus_err,
        tracking_residual,
        gap_floored,
    }
}

/// Run-loop parameters independent of the problem being solved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub iterations: u64,
    /// Record a trace row every `stride` iterations (plus k = 0 and the end).
    pub stride: u64,
    pub init_seed: u64,
    /// Stop early once the recorded gap drops below this value.
    pub gap_tol: Option<f64>,
    /// Abort when a conservation/tracking identity breaks its tolerance.
    pub check_invariants: bool,
}

impl RunConfig {
    pub fn new(iterations: u64, stride: u64, init_seed: u64) -> Self {
        Self {
            iterations,
            stride: stride.max(1),
            init_seed,
            gap_tol: None,
            check_invariants: true,
        }
    }
}

/// Full lock-step run: seeded Gaussian start, topology consulted every
/// iteration, metrics recorded on the stride grid, identities checked every
/// step. Deterministic given the configuration.
pub fn run(
    cfg: &RunConfig,
    step: &StepConfig,
    nonlinearity: &LinkNonlinearity,
    costs: &dyn CostModel,
    topology: &mut dyn TopologyProvider,
    oracle: &OracleResult,
    name: &str,
) -> Result<ExperimentTrace, RunError> {
    let mut state = SwarmState::gaussian_init(costs.nodes(), costs.dim(), cfg.init_seed);
    let mut rows: Vec<TraceRow> = Vec::new();
    let mut max_conservation = 0.0f64;
    let mut max_tracking = 0.0f64;
    let mut clamped_messages = 0u64;
    let mut floored_gap_rows = 0u64;
    let mut status = RunStatus::Completed;

    let record = |state: &SwarmState,
                  rows: &mut Vec<TraceRow>,
                  floored: &mut u64,
                  epoch: u64|
     -> f64 {
        let m = gap_and_residuals(state, costs, oracle.f_star);
        if m.gap_floored {
            *floored += 1;
        }
        rows.push(TraceRow {
            k: state.iteration(),
            gap: m.gap,
            consensus_err: m.consensus_err,
            tracking_residual: m.tracking_residual,
            alpha: step.alpha,
            epoch,
        });
        m.gap
    };

    record(&state, &mut rows, &mut floored_gap_rows, topology.epoch_of(0));

    let build_trace = |rows: Vec<TraceRow>,
                       status: RunStatus,
                       state_k: u64,
                       max_conservation: f64,
                       max_tracking: f64,
                       clamped_messages: u64,
                       floored_gap_rows: u64| {
        let final_gap = rows.last().map_or(f64::NAN, |r| r.gap);
        ExperimentTrace {
            name: name.to_string(),
            rows,
            summary: TraceSummary {
                status,
                iterations_run: state_k,
                final_gap,
                alpha: step.alpha,
                alpha_bar: step.alpha_bar,
                f_star: oracle.f_star,
                oracle_grad_norm: oracle.grad_norm,
                oracle_converged: oracle.converged,
                max_conservation_residual: max_conservation,
                max_tracking_residual: max_tracking,
                clamped_messages,
                floored_gap_rows,
            },
        }
    };

    for k in 0..cfg.iterations {
        let step_result = (|| -> Result<(SwarmState, IterateStats), EngineError> {
            let (a_graph, b_graph) = topology.graphs_at(k)?;
            iterate(&state, a_graph, b_graph, nonlinearity, step.alpha, costs)
        })();
        let (next, stats) = match step_result {
            Ok(v) => v,
            Err(error) => {
                return Err(RunError {
                    error,
                    partial: Box::new(build_trace(
                        rows,
                        status,
                        state.iteration(),
                        max_conservation,
                        max_tracking,
                        clamped_messages,
                        floored_gap_rows,
                    )),
                })
            }
        };
        clamped_messages += stats.clamped_messages;

        let conservation = conservation_residual(&state, &next, step.alpha);
        max_conservation = max_conservation.max(conservation);
        let tracking = tracking_residual_cached(&next);
        max_tracking = max_tracking.max(tracking);
        if cfg.check_invariants {
            for (identity, residual, tol) in [
                ("conservation", conservation, CONSERVATION_TOL),
                ("tracking", tracking, TRACKING_TOL),
            ] {
                if residual > tol {
                    let error = EngineError::InvariantViolated {
                        identity,
                        k: next.iteration(),
                        residual,
                        tol,
                    };
                    return Err(RunError {
                        error,
                        partial: Box::new(build_trace(
                            rows,
                            status,
                            state.iteration(),
                            max_conservation,
                            max_tracking,
                            clamped_messages,
                            floored_gap_rows,
                        )),
                    });
                }
            }
        }

        state = next;
        let k_now = state.iteration();
        if k_now.is_multiple_of(cfg.stride) || k_now == cfg.iterations {
            let gap = record(
                &state,
                &mut rows,
                &mut floored_gap_rows,
                topology.epoch_of(k_now.saturating_sub(1)),
            );
            if let Some(tol) = cfg.gap_tol {
                if gap <= tol {
                    status = RunStatus::ToleranceReached;
                    break;
                }
            }
        }
    }

    Ok(build_trace(
        rows,
        status,
        state.iteration(),
        max_conservation,
        max_tracking,
        clamped_messages,
        floored_gap_rows,
    ))
}

/// Relative residual of `sum x^{k+1} = sum x^k - alpha sum y^k`.
fn conservation_residual(before: &SwarmState, after: &SwarmState, alpha: f64) -> f64 {
    let sx = column_sums(&before.x);
    let sy = column_sums(&before.y);
    let sx_next = column_sums(&after.x);
    let mut num = 0.0;
    let mut scale = 0.0;
    for ((a, b), c) in sx_next.iter().zip(&sx).zip(&sy) {
        let expected = b - alpha * c;
        num += (a - expected) * (a - expected);
        scale += b * b + (alpha * c) * (alpha * c);
    }
    num.sqrt() / scale.sqrt().max(1.0)
}

/// Relative residual of the tracking identity using the engine's own
/// gradient cache (which is exactly `grad f_i(x_i^k)` after an update).
fn tracking_residual_cached(state: &SwarmState) -> f64 {
    let sy = column_sums(&state.y);
    let sg = column_sums(&state.grad_prev);
    let num: f64 = sy
        .iter()
        .zip(&sg)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    let grad_norm: f64 = state.grad_prev.iter().map(|v| v * v).sum::<f64>().sqrt();
    num / grad_norm.max(1.0)
}

fn column_sums(m: &Array2<f64>) -> Vec<f64> {
    let (n, p) = m.dim();
    let flat = m.as_slice().expect("row-major");
    let mut sums = vec![0.0; p];
    for i in 0..n {
        for c in 0..p {
            sums[c] += flat[i * p + c];
        }
    }
    sums
}

fn column_means(m: &Array2<f64>) -> Vec<f64> {
    let n = m.nrows() as f64;
    let mut sums = column_sums(m);
    for s in sums.iter_mut() {
        *s /= n;
    }
    sums
}
