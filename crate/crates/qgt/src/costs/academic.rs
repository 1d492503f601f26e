//! Academic non-convex benchmark.
//!
//! Component costs `f_{i,j}(x) = 4x^2 + 3 sin^2(x) + a_{i,j} cos(x) + b_{i,j} x`
//! with zero-sum parameter matrices. Individual nodes can be locally
//! non-convex, but the a/b terms cancel in the average, leaving the strongly
//! convex global cost `F(x) = 4x^2 + 3 sin^2(x)` with minimizer 0.

use std::fmt::Write as _;
use std::path::Path;

use ndarray::Array2;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{CostError, CostModel};

/// Redraws before parameter generation gives up.
pub const GENERATION_RETRY_CAP: u32 = 100;

const DEAD_BAND: f64 = 0.1;
const ZERO_SUM_TOL: f64 = 1e-12;

/// The `a_{i,j}` / `b_{i,j}` matrices (n nodes by m components per node).
#[derive(Debug, Clone, PartialEq)]
pub struct AcademicParams {
    a: Array2<f64>,
    b: Array2<f64>,
    amplitude: f64,
}

impl AcademicParams {
    /// Validates externally supplied matrices: exact zero sums (within
    /// 1e-12), nonzero entries, entries within the amplitude range.
    pub fn new(a: Array2<f64>, b: Array2<f64>, amplitude: f64) -> Result<Self, CostError> {
        if a.dim() != b.dim() {
            return Err(CostError::DimensionMismatch(format!(
                "a is {:?} but b is {:?}",
                a.dim(),
                b.dim()
            )));
        }
        if a.nrows() == 0 || a.ncols() == 0 {
            return Err(CostError::InvalidParameter {
                name: "a",
                reason: "matrices must be non-empty".into(),
            });
        }
        for m in [&a, &b] {
            let sum: f64 = m.iter().sum();
            if sum.abs() > ZERO_SUM_TOL {
                return Err(CostError::ZeroSumViolation(sum));
            }
            for &e in m.iter() {
                if e == 0.0 || !e.is_finite() || e.abs() > amplitude {
                    return Err(CostError::InvalidParameter {
                        name: "entries",
                        reason: format!("entry {e} outside nonzero range [-{amplitude}, {amplitude}]"),
                    });
                }
            }
        }
        Ok(Self { a, b, amplitude })
    }

    /// Draws entries uniform in `[-amplitude, amplitude]` with a dead band
    /// `|entry| >= 0.1`, then mean-subtracts each matrix for an exact zero
    /// sum. Redraws when the subtraction zeroes or over-ranges an entry.
    pub fn generate(
        n: usize,
        m: usize,
        seed: u64,
        amplitude: f64,
    ) -> Result<Self, CostError> {
        if n * m < 2 {
            return Err(CostError::InvalidParameter {
                name: "n*m",
                reason: format!("need at least 2 entries, got {n}x{m}"),
            });
        }
        if !(amplitude.is_finite() && amplitude > DEAD_BAND) {
            return Err(CostError::InvalidParameter {
                name: "amplitude",
                reason: format!("must exceed the {DEAD_BAND} dead band, got {amplitude}"),
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..GENERATION_RETRY_CAP {
            let a = draw_zero_sum_matrix(n, m, amplitude, &mut rng);
            let b = draw_zero_sum_matrix(n, m, amplitude, &mut rng);
            if let (Some(a), Some(b)) = (a, b) {
                return Self::new(a, b, amplitude);
            }
        }
        Err(CostError::GenerationFailed {
            attempts: GENERATION_RETRY_CAP,
        })
    }

    pub fn nodes(&self) -> usize {
        self.a.nrows()
    }

    pub fn components(&self) -> usize {
        self.a.ncols()
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn a(&self) -> &Array2<f64> {
        &self.a
    }

    pub fn b(&self) -> &Array2<f64> {
        &self.b
    }

    pub fn a_row_mean(&self, node: usize) -> f64 {
        self.a.row(node).mean().unwrap()
    }

    pub fn b_row_mean(&self, node: usize) -> f64 {
        self.b.row(node).mean().unwrap()
    }

    /// Worst-case second-derivative bound: `|f''| <= 8 + 6 + max_i |a-bar_i|`.
    pub fn smoothness_bound(&self) -> f64 {
        let max_mean = (0..self.nodes())
            .map(|i| self.a_row_mean(i).abs())
            .fold(0.0, f64::max);
        14.0 + max_mean
    }

    /// Plain-text form: `n m` header, then the n rows of `a`, then the n
    /// rows of `b`, 17 significant digits per entry.
    pub fn to_matrix_text(&self) -> String {
        let (n, m) = self.a.dim();
        let mut s = String::new();
        let _ = writeln!(s, "{n} {m}");
        for matrix in [&self.a, &self.b] {
            for i in 0..n {
                let row: Vec<String> = matrix.row(i).iter().map(|v| format!("{v:.16e}")).collect();
                let _ = writeln!(s, "{}", row.join(" "));
            }
        }
        s
    }

    pub fn from_matrix_text(text: &str, amplitude: f64) -> Result<Self, CostError> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(CostError::Parse {
            line: 1,
            reason: "empty matrix file".into(),
        })?;
        let dims: Vec<&str> = header.split_whitespace().collect();
        if dims.len() != 2 {
            return Err(CostError::Parse {
                line: 1,
                reason: format!("expected `n m`, got `{header}`"),
            });
        }
        let n: usize = dims[0].parse().map_err(|e| CostError::Parse {
            line: 1,
            reason: format!("bad n: {e}"),
        })?;
        let m: usize = dims[1].parse().map_err(|e| CostError::Parse {
            line: 1,
            reason: format!("bad m: {e}"),
        })?;
        let mut rows = Vec::with_capacity(2 * n);
        for (idx, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let row: Result<Vec<f64>, _> = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<f64>().map_err(|e| CostError::Parse {
                        line: idx + 1,
                        reason: format!("bad entry: {e}"),
                    })
                })
                .collect();
            let row = row?;
            if row.len() != m {
                return Err(CostError::Parse {
                    line: idx + 1,
                    reason: format!("expected {m} entries, got {}", row.len()),
                });
            }
            rows.push(row);
        }
        if rows.len() != 2 * n {
            return Err(CostError::Parse {
                line: 0,
                reason: format!("expected {} rows, got {}", 2 * n, rows.len()),
            });
        }
        let flat_a: Vec<f64> = rows[..n].iter().flatten().copied().collect();
        let flat_b: Vec<f64> = rows[n..].iter().flatten().copied().collect();
        let a = Array2::from_shape_vec((n, m), flat_a).expect("shape checked above");
        let b = Array2::from_shape_vec((n, m), flat_b).expect("shape checked above");
        Self::new(a, b, amplitude)
    }

    pub fn write_matrix_file(&self, path: &Path) -> Result<(), CostError> {
        std::fs::write(path, self.to_matrix_text())?;
        Ok(())
    }

    pub fn read_matrix_file(path: &Path, amplitude: f64) -> Result<Self, CostError> {
        Self::from_matrix_text(&std::fs::read_to_string(path)?, amplitude)
    }
}

fn draw_zero_sum_matrix(
    n: usize,
    m: usize,
    amplitude: f64,
    rng: &mut ChaCha8Rng,
) -> Option<Array2<f64>> {
    let count = n * m;
    let mut entries = Vec::with_capacity(count);
    for _ in 0..count {
        loop {
            let v: f64 = rng.random_range(-amplitude..=amplitude);
            if v.abs() >= DEAD_BAND {
                entries.push(v);
                break;
            }
        }
    }
    // Two correction passes drive the sum to an exact zero within tolerance.
    for _ in 0..2 {
        let mean: f64 = entries.iter().sum::<f64>() / count as f64;
        for e in entries.iter_mut() {
            *e -= mean;
        }
    }
    let sum: f64 = entries.iter().sum();
    if sum.abs() > ZERO_SUM_TOL {
        return None;
    }
    if entries.iter().any(|e| e.abs() < 1e-9 || e.abs() > amplitude) {
        return None;
    }
    Some(Array2::from_shape_vec((n, m), entries).expect("length is n*m"))
}

/// Cost model wrapping [`AcademicParams`]; decision variable is scalar.
#[derive(Debug, Clone)]
pub struct AcademicCost {
    params: AcademicParams,
    a_means: Vec<f64>,
    b_means: Vec<f64>,
    smoothness: f64,
}

impl AcademicCost {
    pub fn new(params: AcademicParams) -> Self {
        let a_means = (0..params.nodes()).map(|i| params.a_row_mean(i)).collect();
        let b_means = (0..params.nodes()).map(|i| params.b_row_mean(i)).collect();
        let smoothness = params.smoothness_bound();
        Self {
            params,
            a_means,
            b_means,
            smoothness,
        }
    }

    pub fn params(&self) -> &AcademicParams {
        &self.params
    }

    /// Exact local second derivative, used by curvature spot checks.
    pub fn second_derivative(&self, node: usize, x: f64) -> f64 {
        8.0 + 6.0 * (2.0 * x).cos() - self.a_means[node] * x.cos()
    }
}

impl CostModel for AcademicCost {
    fn nodes(&self) -> usize {
        self.params.nodes()
    }

    fn dim(&self) -> usize {
        1
    }

    fn value(&self, node: usize, x: &[f64]) -> f64 {
        let x = x[0];
        let s = x.sin();
        4.0 * x * x + 3.0 * s * s + self.a_means[node] * x.cos() + self.b_means[node] * x
    }

    fn gradient(&self, node: usize, x: &[f64], out: &mut [f64]) {
        let x = x[0];
        out[0] = 8.0 * x + 3.0 * (2.0 * x).sin() - self.a_means[node] * x.sin()
            + self.b_means[node];
    }

    fn smoothness(&self) -> f64 {
        self.smoothness
    }

    /// `F''(x) = 8 + 6 cos(2x)` bottoms out at 2.
    fn strong_convexity(&self) -> f64 {
        2.0
    }
}
