use thiserror::Error;

/// Errors produced by the evaluation, zero-location and radius machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("series did not converge within {max_terms} terms at |z| = {abs_z}")]
    NonConvergence { max_terms: usize, abs_z: f64 },

    #[error("zero search failed on [{scanned_from}, {scanned_to}]: {reason}")]
    ZeroSearchFailure {
        scanned_from: f64,
        scanned_to: f64,
        reason: String,
    },

    #[error("evaluation point {z} is within the guard distance of a pole at {pole}")]
    PoleProximity { z: String, pole: f64 },

    #[error("derivative of the normalized function nearly vanishes at {z}")]
    DerivativeZeroProximity { z: String },

    #[error("residual does not change sign on ({lo}, {hi}): f(lo) = {f_lo}, f(hi) = {f_hi}")]
    BracketFailure { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("verification inconclusive: {0}")]
    InconclusiveVerification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
