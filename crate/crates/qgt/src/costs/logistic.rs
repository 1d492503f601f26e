//! Regularized binary logistic regression over partitioned data.
//!
//! Node `i` holds `m_i` feature vectors with +1/-1 labels and minimizes
//!
//! ```text
//! f_i(b, c) = (1/m_i) sum_j ln(1 + exp(-(b^T x_{i,j} + c) y_{i,j})) + (lambda/2) ||b||^2
//! ```
//!
//! The decision vector is `[b; c]` (hyperplane normal then intercept); the
//! ridge term penalizes `b` only. Losses and gradients use the log1p/exp
//! formulation that stays finite for large margins.

use ndarray::Array2;

use super::{CostError, CostModel};

#[derive(Debug, Clone, PartialEq)]
pub struct LogisticData {
    /// Per node: `m_i x d` feature matrix.
    features: Vec<Array2<f64>>,
    /// Per node: labels in {-1, +1}.
    labels: Vec<Vec<f64>>,
    lambda: f64,
    feature_dim: usize,
}

impl LogisticData {
    pub fn new(
        features: Vec<Array2<f64>>,
        labels: Vec<Vec<f64>>,
        lambda: f64,
    ) -> Result<Self, CostError> {
        if features.is_empty() {
            return Err(CostError::InvalidParameter {
                name: "features",
                reason: "need at least one node".into(),
            });
        }
        if features.len() != labels.len() {
            return Err(CostError::DimensionMismatch(format!(
                "{} feature blocks vs {} label blocks",
                features.len(),
                labels.len()
            )));
        }
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(CostError::InvalidParameter {
                name: "lambda",
                reason: format!("regularizer must be nonnegative, got {lambda}"),
            });
        }
        let feature_dim = features[0].ncols();
        if feature_dim == 0 {
            return Err(CostError::InvalidParameter {
                name: "features",
                reason: "feature dimension must be positive".into(),
            });
        }
        for (node, (f, l)) in features.iter().zip(&labels).enumerate() {
            if f.nrows() == 0 {
                return Err(CostError::EmptyNode(node));
            }
            if f.ncols() != feature_dim {
                return Err(CostError::DimensionMismatch(format!(
                    "node {node} has feature dimension {} != {feature_dim}",
                    f.ncols()
                )));
            }
            if f.nrows() != l.len() {
                return Err(CostError::DimensionMismatch(format!(
                    "node {node} has {} samples but {} labels",
                    f.nrows(),
                    l.len()
                )));
            }
            for &y in l {
                if y != 1.0 && y != -1.0 {
                    return Err(CostError::InvalidLabel { node, value: y });
                }
            }
        }
        Ok(Self {
            features,
            labels,
            lambda,
            feature_dim,
        })
    }

    pub fn nodes(&self) -> usize {
        self.features.len()
    }

    pub fn feature_dim(&self) -> usize {
        self.feature_dim
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn samples_at(&self, node: usize) -> usize {
        self.features[node].nrows()
    }

    pub fn features_at(&self, node: usize) -> &Array2<f64> {
        &self.features[node]
    }

    pub fn labels_at(&self, node: usize) -> &[f64] {
        &self.labels[node]
    }

    /// Standard logistic smoothness bound:
    /// `max_i (1/(4 m_i)) sum_j ||(x_{i,j}, 1)||^2 + lambda`.
    pub fn smoothness_bound(&self) -> f64 {
        let worst = self
            .features
            .iter()
            .map(|f| {
                let m = f.nrows() as f64;
                let total: f64 = f.iter().map(|v| v * v).sum::<f64>() + m;
                total / (4.0 * m)
            })
            .fold(0.0, f64::max);
        worst + self.lambda
    }
}

/// `ln(1 + exp(-t))` without overflow.
fn softplus_neg(t: f64) -> f64 {
    if t >= 0.0 {
        (-t).exp().ln_1p()
    } else {
        -t + t.exp().ln_1p()
    }
}

/// `sigma(-t) = 1 / (1 + exp(t))` without overflow.
fn sigmoid_neg(t: f64) -> f64 {
    if t >= 0.0 {
        let e = (-t).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + t.exp())
    }
}

#[derive(Debug, Clone)]
pub struct LogisticCost {
    data: LogisticData,
    smoothness: f64,
}

impl LogisticCost {
    pub fn new(data: LogisticData) -> Self {
        let smoothness = data.smoothness_bound();
        Self { data, smoothness }
    }

    pub fn data(&self) -> &LogisticData {
        &self.data
    }

    fn margin(&self, node: usize, sample: usize, w: &[f64]) -> f64 {
        let d = self.data.feature_dim;
        let block = self.data.features[node].as_slice().expect("row-major features");
        let x = &block[sample * d..(sample + 1) * d];
        let mut dot = w[d]; // intercept
        for (wi, xi) in w[..d].iter().zip(x) {
            dot += wi * xi;
        }
        dot * self.data.labels[node][sample]
    }

    /// Exact Hessian-vector product of `f_i` at `w`, for curvature checks.
    pub fn hessian_vector_product(&self, node: usize, w: &[f64], v: &[f64], out: &mut [f64]) {
        let d = self.data.feature_dim;
        let m = self.data.samples_at(node) as f64;
        let block = self.data.features[node].as_slice().expect("row-major features");
        out.fill(0.0);
        for j in 0..self.data.samples_at(node) {
            let t = self.margin(node, j, w);
            let s = sigmoid_neg(t);
            let weight = s * (1.0 - s) / m;
            let x = &block[j * d..(j + 1) * d];
            // (x, 1) (x, 1)^T v  scaled by sigma'(t)
            let mut xv = v[d];
            for (xi, vi) in x.iter().zip(&v[..d]) {
                xv += xi * vi;
            }
            let scaled = weight * xv;
            for (o, xi) in out[..d].iter_mut().zip(x) {
                *o += scaled * xi;
            }
            out[d] += scaled;
        }
        for (o, vi) in out[..d].iter_mut().zip(&v[..d]) {
            *o += self.data.lambda * vi;
        }
    }
}

impl CostModel for LogisticCost {
    fn nodes(&self) -> usize {
        self.data.nodes()
    }

    fn dim(&self) -> usize {
        self.data.feature_dim + 1
    }

    fn value(&self, node: usize, w: &[f64]) -> f64 {
        let d = self.data.feature_dim;
        let m = self.data.samples_at(node) as f64;
        let mut loss = 0.0;
        for j in 0..self.data.samples_at(node) {
            loss += softplus_neg(self.margin(node, j, w));
        }
        let ridge: f64 = w[..d].iter().map(|b| b * b).sum();
        loss / m + 0.5 * self.data.lambda * ridge
    }

    fn gradient(&self, node: usize, w: &[f64], out: &mut [f64]) {
        let d = self.data.feature_dim;
        let m = self.data.samples_at(node) as f64;
        let block = self.data.features[node].as_slice().expect("row-major features");
        out.fill(0.0);
        for j in 0..self.data.samples_at(node) {
            let t = self.margin(node, j, w);
            let coef = -sigmoid_neg(t) * self.data.labels[node][j] / m;
            let x = &block[j * d..(j + 1) * d];
            for (o, xi) in out[..d].iter_mut().zip(x) {
                *o += coef * xi;
            }
            out[d] += coef;
        }
        for (o, b) in out[..d].iter_mut().zip(&w[..d]) {
            *o += self.data.lambda * b;
        }
    }

    fn smoothness(&self) -> f64 {
        self.smoothness
    }

    /// Ridge-induced lower curvature bound.
    fn strong_convexity(&self) -> f64 {
        self.data.lambda
    }
}
