//! Laplacians and their spectra.
//!
//! The Laplacian convention here has zero row sums and a stable spectrum:
//! off-diagonal `(i, j) = a_ij`, diagonal `(i, i) = -sum_j a_ij`. For a
//! connected weight-balanced graph exactly one eigenvalue sits at zero and
//! the rest lie strictly in the left half-plane; `|Re(lambda_2)|` is the
//! algebraic connectivity that gates the admissible step size.

use nalgebra::{Complex, DMatrix};
use thiserror::Error;

use super::WeightedDigraph;

/// Magnitude below which an eigenvalue counts as the structural zero.
pub const ZERO_EIGENVALUE_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectrumError {
    #[error("matrix of size {0} has no second eigenvalue")]
    TooSmall(usize),
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("eigensolver did not converge within {0} iterations")]
    NotConverged(usize),
}

/// Dense Laplacian of the incoming-weight matrix. Summing a row's
/// off-diagonal entries and negating gives the diagonal, so each row sums to
/// zero exactly (same additions, opposite sign); column sums vanish within
/// roundoff by weight balance.
pub fn laplacian(g: &WeightedDigraph) -> DMatrix<f64> {
    let n = g.node_count();
    let mut m = DMatrix::zeros(n, n);
    for l in g.links() {
        m[(l.to, l.from)] += l.weight;
    }
    for i in 0..n {
        let mut row_sum = 0.0;
        for j in 0..n {
            if j != i {
                row_sum += m[(i, j)];
            }
        }
        m[(i, i)] = -row_sum;
    }
    m
}

/// All eigenvalues sorted by descending real part, plus `|Re(lambda_2)|`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianSpectrum {
    pub eigenvalues: Vec<Complex<f64>>,
    pub lambda2_real_abs: f64,
}

impl LaplacianSpectrum {
    /// Checks the connected-WB signature: exactly one eigenvalue of magnitude
    /// below [`ZERO_EIGENVALUE_TOL`], all others with negative real part.
    pub fn has_isolated_zero(&self) -> bool {
        let zeros = self
            .eigenvalues
            .iter()
            .filter(|e| e.norm() < ZERO_EIGENVALUE_TOL)
            .count();
        zeros == 1
            && self
                .eigenvalues
                .iter()
                .filter(|e| e.norm() >= ZERO_EIGENVALUE_TOL)
                .all(|e| e.re < 0.0)
    }
}

const EIGEN_MAX_ITER: usize = 10_000;

/// Dense complex-capable eigensolver (real Schur reduction), adequate for the
/// desk-scale n <= 64 this crate targets.
pub fn spectrum(l: &DMatrix<f64>) -> Result<LaplacianSpectrum, SpectrumError> {
    if l.nrows() != l.ncols() {
        return Err(SpectrumError::NotSquare {
            rows: l.nrows(),
            cols: l.ncols(),
        });
    }
    let n = l.nrows();
    if n < 2 {
        return Err(SpectrumError::TooSmall(n));
    }
    let schur = nalgebra::linalg::Schur::try_new(l.clone(), f64::EPSILON, EIGEN_MAX_ITER)
        .ok_or(SpectrumError::NotConverged(EIGEN_MAX_ITER))?;
    let mut eigenvalues: Vec<Complex<f64>> = schur.complex_eigenvalues().iter().copied().collect();
    eigenvalues.sort_by(|a, b| {
        b.re.partial_cmp(&a.re)
            .unwrap()
            .then(b.im.partial_cmp(&a.im).unwrap())
    });
    let lambda2_real_abs = eigenvalues[1].re.abs();
    Ok(LaplacianSpectrum {
        eigenvalues,
        lambda2_real_abs,
    })
}

/// Convenience: spectrum of a graph's Laplacian.
pub fn spectrum_of(g: &WeightedDigraph) -> Result<LaplacianSpectrum, SpectrumError> {
    spectrum(&laplacian(g))
}
