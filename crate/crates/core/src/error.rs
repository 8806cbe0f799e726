use thiserror::Error;

/// Errors raised by the model layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("outside the model domain: {0}")]
    Domain(String),
    #[error("basic reproduction number is at most one; no intervention is needed")]
    NoInterventionNeeded,
    #[error("vaccine-adoption rates are not admissible for eradication")]
    NotAdmissible,
    #[error("cost pair is not in the mixed regime")]
    NotMixedRegime,
    #[error("side effects of vaccination are not outweighed at full influence (c_v1 - c_f(M) >= 0)")]
    InsufficientInfluence,
    #[error("no bracket found for root: {0}")]
    Bracketing(String),
    #[error("iteration cap reached: {0}")]
    IterationCap(String),
    #[error("integrator failed to converge: {0}")]
    NonConvergence(String),
    #[error("selector returned {value} which is not in the admissible set at t={t}, z={z}")]
    SelectorOutsideSet { t: usize, z: usize, value: f64 },
}

pub type Result<R> = std::result::Result<R, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
