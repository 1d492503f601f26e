//! Link nonlinearities applied to every vector a node transmits.
//!
//! Two quantizers are provided next to the identity map:
//!
//! * log-scale: `q(z) = sgn(z) * exp(rho * round(ln|z| / rho))` — multiplicative
//!   precision, finer near zero, sector-bound;
//! * uniform: `q(z) = rho * round(z / rho)` — additive precision `rho/2`,
//!   not sector-bound (its envelope does not pass through the origin).
//!
//! Rounding is half-away-from-zero throughout, so both maps are exactly odd.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantizeError {
    #[error("quantizer input must be finite, got {0}")]
    NonFiniteInput(f64),
    #[error("quantization level must be positive and finite, got {0}")]
    InvalidLevel(f64),
}

/// Which map a link applies to transmitted values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NonlinearityKind {
    LogScale,
    Uniform,
    Identity,
}

impl std::fmt::Display for NonlinearityKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NonlinearityKind::LogScale => write!(f, "log"),
            NonlinearityKind::Uniform => write!(f, "uniform"),
            NonlinearityKind::Identity => write!(f, "none"),
        }
    }
}

/// An elementwise link map together with its sector certificate, when one exists.
///
/// Log-scale and identity maps are sector-bound (`K_lower * z <= h(z) <= K_upper * z`
/// for z > 0); uniform quantization carries no certificate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkNonlinearity {
    kind: NonlinearityKind,
    rho: f64,
}

impl LinkNonlinearity {
    pub fn log_scale(rho: f64) -> Result<Self, QuantizeError> {
        check_level(rho)?;
        Ok(Self { kind: NonlinearityKind::LogScale, rho })
    }

    pub fn uniform(rho: f64) -> Result<Self, QuantizeError> {
        check_level(rho)?;
        Ok(Self { kind: NonlinearityKind::Uniform, rho })
    }

    pub fn identity() -> Self {
        Self { kind: NonlinearityKind::Identity, rho: 0.0 }
    }

    pub fn kind(&self) -> NonlinearityKind {
        self.kind
    }

    /// Quantization level; `None` for the identity map.
    pub fn rho(&self) -> Option<f64> {
        match self.kind {
            NonlinearityKind::Identity => None,
            _ => Some(self.rho),
        }
    }

    /// Sector certificate `(K_lower, K_upper)`.
    ///
    /// Log-scale returns the exact bounds `(exp(-rho/2), exp(rho/2))` — these hold
    /// verbatim for every input, unlike the first-order `1 ± rho/2` envelope.
    /// The identity returns `(1, 1)`. Uniform quantization returns `None`.
    pub fn sector_bounds(&self) -> Option<(f64, f64)> {
        match self.kind {
            NonlinearityKind::LogScale => Some(((-self.rho / 2.0).exp(), (self.rho / 2.0).exp())),
            NonlinearityKind::Identity => Some((1.0, 1.0)),
            NonlinearityKind::Uniform => None,
        }
    }

    /// Upper sector constant used when sizing the step; 1 when no certificate exists.
    pub fn sector_upper_or_one(&self) -> f64 {
        self.sector_bounds().map_or(1.0, |(_, upper)| upper)
    }

    pub fn apply_scalar(&self, z: f64) -> Result<f64, QuantizeError> {
        match self.kind {
            NonlinearityKind::LogScale => quantize_log(z, self.rho),
            NonlinearityKind::Uniform => quantize_uniform(z, self.rho),
            NonlinearityKind::Identity => {
                if z.is_finite() {
                    Ok(z)
                } else {
                    Err(QuantizeError::NonFiniteInput(z))
                }
            }
        }
    }

    /// Elementwise map of a transmitted vector.
    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>, QuantizeError> {
        let mut out = vec![0.0; v.len()];
        self.apply_into(v, &mut out)?;
        Ok(out)
    }

    /// Elementwise map into a caller-provided buffer; returns how many entries
    /// had to be clamped at the representable-exponent limits (trace diagnostic).
    pub fn apply_into(&self, v: &[f64], out: &mut [f64]) -> Result<u64, QuantizeError> {
        assert_eq!(v.len(), out.len(), "output buffer length mismatch");
        let mut clamped = 0u64;
        match self.kind {
            NonlinearityKind::Identity => {
                for (o, &z) in out.iter_mut().zip(v) {
                    if !z.is_finite() {
                        return Err(QuantizeError::NonFiniteInput(z));
                    }
                    *o = z;
                }
            }
            NonlinearityKind::LogScale => {
                for (o, &z) in out.iter_mut().zip(v) {
                    let (q, c) = quantize_log_clamped(z, self.rho)?;
                    *o = q;
                    clamped += u64::from(c);
                }
            }
            NonlinearityKind::Uniform => {
                for (o, &z) in out.iter_mut().zip(v) {
                    *o = quantize_uniform(z, self.rho)?;
                }
            }
        }
        Ok(clamped)
    }
}

fn check_level(rho: f64) -> Result<(), QuantizeError> {
    if rho.is_finite() && rho > 0.0 {
        Ok(())
    } else {
        Err(QuantizeError::InvalidLevel(rho))
    }
}

/// Log-scale quantization `sgn(z) * exp(rho * round(ln|z| / rho))`.
///
/// `q(0) = 0`: the formula is singular at zero and the map must stay odd and
/// sign-preserving, which forces the value.
pub fn quantize_log(z: f64, rho: f64) -> Result<f64, QuantizeError> {
    quantize_log_clamped(z, rho).map(|(q, _)| q)
}

/// Like [`quantize_log`], also reporting whether the exponent had to be clamped
/// to the largest (or smallest) finite representable multiple of `rho`.
pub fn quantize_log_clamped(z: f64, rho: f64) -> Result<(f64, bool), QuantizeError> {
    check_level(rho)?;
    if !z.is_finite() {
        return Err(QuantizeError::NonFiniteInput(z));
    }
    if z == 0.0 {
        return Ok((0.0, false));
    }
    let exponent = rho * (z.abs().ln() / rho).round();
    let mut magnitude = exponent.exp();
    let mut clamped = false;
    if !magnitude.is_finite() {
        magnitude = (rho * (f64::MAX.ln() / rho).floor()).exp();
        clamped = true;
    } else if magnitude == 0.0 {
        // exp underflow for inputs at the subnormal floor; keep the sign alive.
        magnitude = (rho * (f64::MIN_POSITIVE.ln() / rho).ceil()).exp();
        clamped = true;
    }
    Ok((z.signum() * magnitude, clamped))
}

/// Uniform quantization `rho * round(z / rho)` with half-away-from-zero ties.
pub fn quantize_uniform(z: f64, rho: f64) -> Result<f64, QuantizeError> {
    check_level(rho)?;
    if !z.is_finite() {
        return Err(QuantizeError::NonFiniteInput(z));
    }
    let q = rho * (z / rho).round();
    if q.is_finite() {
        Ok(q)
    } else {
        Ok(z.signum() * rho * (f64::MAX / rho).floor())
    }
}
