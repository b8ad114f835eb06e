use thiserror::Error;

use crate::quadrature::QuadratureError;
use crate::special::PolylogError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Polylog(#[from] PolylogError),

    #[error(transparent)]
    Quadrature(#[from] QuadratureError),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("singular reparametrization at N_C = {n_c:e}, T = {temperature:e} K (normalized determinant {normalized_det:e})")]
    SingularSystem { n_c: f64, temperature: f64, normalized_det: f64 },

    #[error("Gross-Pitaevskii solve did not converge in {iterations} iterations (relative dμ/dτ = {rate:e})")]
    GpNotConverged { iterations: usize, rate: f64 },

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("step size underflow at t = {t} s (h = {h:e} s)")]
    StepUnderflow { t: f64, h: f64 },

    #[error("step limit reached at t = {t} s")]
    TooManySteps { t: f64 },

    #[error("no temperature in [{lo:e}, {hi:e}] K gives N_T = {target:e}")]
    TemperatureBracket { lo: f64, hi: f64, target: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && !value.is_nan() {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, reason: format!("must be positive, got {value}") })
    }
}

pub(crate) fn check_non_negative(name: &'static str, value: f64) -> Result<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, reason: format!("must be non-negative, got {value}") })
    }
}
