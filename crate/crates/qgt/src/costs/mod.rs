//! Local cost models: per-node value/gradient evaluators plus the smoothness
//! constant the step-size bound needs.
//!
//! The global objective is always the average `F(x) = (1/n) sum_i f_i(x)`.
//! Local costs may be non-convex as long as F is strongly convex; the
//! academic benchmark exercises exactly that regime.

mod academic;
mod logistic;

pub use academic::{AcademicCost, AcademicParams, GENERATION_RETRY_CAP};
pub use logistic::{LogisticCost, LogisticData};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CostError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("label {value} at node {node} is not +1/-1")]
    InvalidLabel { node: usize, value: f64 },
    #[error("node {0} has no samples")]
    EmptyNode(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parameter generation failed after {attempts} attempts")]
    GenerationFailed { attempts: u32 },
    #[error("zero-sum constraint violated: residual {0:e}")]
    ZeroSumViolation(f64),
    #[error("matrix parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Per-node cost evaluators over a shared decision vector.
///
/// Implementations are immutable after construction; evaluation is reentrant
/// and safe to call from parallel per-node loops.
pub trait CostModel: Sync {
    fn nodes(&self) -> usize;
    fn dim(&self) -> usize;
    /// Local cost `f_i(x)`.
    fn value(&self, node: usize, x: &[f64]) -> f64;
    /// Exact gradient of `f_i` written into `out`.
    fn gradient(&self, node: usize, x: &[f64], out: &mut [f64]);
    /// Global smoothness constant `L` (upper bound on any local Hessian norm).
    fn smoothness(&self) -> f64;
    /// Strong-convexity constant of the global cost; reporting metadata only.
    fn strong_convexity(&self) -> f64;

    /// Global cost `F(x) = (1/n) sum_i f_i(x)`, summed in node order.
    fn global_value(&self, x: &[f64]) -> f64 {
        let mut total = 0.0;
        for i in 0..self.nodes() {
            total += self.value(i, x);
        }
        total / self.nodes() as f64
    }

    /// Global gradient, summed in node order.
    fn global_gradient(&self, x: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        let mut buf = vec![0.0; self.dim()];
        for i in 0..self.nodes() {
            self.gradient(i, x, &mut buf);
            for (o, g) in out.iter_mut().zip(&buf) {
                *o += g;
            }
        }
        let inv = 1.0 / self.nodes() as f64;
        for o in out.iter_mut() {
            *o *= inv;
        }
    }
}

/// Toy model `f_i(x) = ||x - c_i||^2` with the analytic minimizer at the
/// center average; handy for engine and oracle sanity checks.
#[derive(Debug, Clone)]
pub struct QuadraticCost {
    centers: Vec<Vec<f64>>,
}

impl QuadraticCost {
    pub fn new(centers: Vec<Vec<f64>>) -> Result<Self, CostError> {
        if centers.is_empty() {
            return Err(CostError::InvalidParameter {
                name: "centers",
                reason: "need at least one node".into(),
            });
        }
        let dim = centers[0].len();
        if dim == 0 || centers.iter().any(|c| c.len() != dim) {
            return Err(CostError::DimensionMismatch(
                "all centers must share a positive dimension".into(),
            ));
        }
        Ok(Self { centers })
    }

    pub fn center_mean(&self) -> Vec<f64> {
        let dim = self.centers[0].len();
        let mut mean = vec![0.0; dim];
        for c in &self.centers {
            for (m, v) in mean.iter_mut().zip(c) {
                *m += v;
            }
        }
        for m in mean.iter_mut() {
            *m /= self.centers.len() as f64;
        }
        mean
    }
}

impl CostModel for QuadraticCost {
    fn nodes(&self) -> usize {
        self.centers.len()
    }

    fn dim(&self) -> usize {
        self.centers[0].len()
    }

    fn value(&self, node: usize, x: &[f64]) -> f64 {
        self.centers[node]
            .iter()
            .zip(x)
            .map(|(c, xi)| (xi - c) * (xi - c))
            .sum()
    }

    fn gradient(&self, node: usize, x: &[f64], out: &mut [f64]) {
        for ((o, c), xi) in out.iter_mut().zip(&self.centers[node]).zip(x) {
            *o = 2.0 * (xi - c);
        }
    }

    fn smoothness(&self) -> f64 {
        2.0
    }

    fn strong_convexity(&self) -> f64 {
        2.0
    }
}

/// Central finite differences, the independent check against analytic
/// gradients: `(f(x + h e_j) - f(x - h e_j)) / 2h`.
pub fn central_difference_gradient<F>(f: F, x: &[f64], step: f64) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64,
{
    let mut grad = Vec::with_capacity(x.len());
    let mut probe = x.to_vec();
    for j in 0..x.len() {
        probe[j] = x[j] + step;
        let plus = f(&probe);
        probe[j] = x[j] - step;
        let minus = f(&probe);
        probe[j] = x[j];
        grad.push((plus - minus) / (2.0 * step));
    }
    grad
}

/// Largest relative deviation between two gradients, with a unit floor on the
/// denominator so near-zero components compare absolutely.
pub fn max_relative_deviation(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs() / x.abs().max(y.abs()).max(1.0))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_gradients_match_finite_differences() {
        let cost = QuadraticCost::new(vec![vec![1.0, -2.0], vec![0.5, 3.0]]).unwrap();
        let x = [0.3, 0.7];
        for node in 0..2 {
            let mut grad = vec![0.0; 2];
            cost.gradient(node, &x, &mut grad);
            let fd = central_difference_gradient(|p| cost.value(node, p), &x, 1e-6);
            assert!(max_relative_deviation(&grad, &fd) < 1e-8);
        }
    }

    #[test]
    fn global_value_averages_locals() {
        let cost = QuadraticCost::new(vec![vec![1.0], vec![-1.0]]).unwrap();
        // f_0(0) = 1, f_1(0) = 1 -> F(0) = 1
        assert_eq!(cost.global_value(&[0.0]), 1.0);
        let mut g = vec![0.0];
        cost.global_gradient(&[0.0], &mut g);
        assert_eq!(g[0], 0.0);
        assert_eq!(cost.center_mean(), vec![0.0]);
    }
}
