use thiserror::Error;

/// Errors raised by the analytic engines and the Fock-space oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("polynomial order {order} exceeds the configured maximum {max}")]
    OrderOverflow { order: usize, max: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("truncation at n_max = {n_max} leaves tail mass {tail:e}; try n_max >= {suggested}")]
    Truncation {
        n_max: usize,
        tail: f64,
        suggested: usize,
    },

    #[error("numerical consistency check failed: {0}")]
    NumericalConsistency(String),

    #[error(
        "Fock dimension {dim} leaves tail population {tail:e} above budget {budget:e}; \
         try dim >= {suggested}"
    )]
    Dimension {
        dim: usize,
        tail: f64,
        budget: f64,
        suggested: usize,
    },

    #[error("tail budget breached at t = {t}: population {tail:e} exceeds {budget:e}")]
    TailBreach { t: f64, tail: f64, budget: f64 },

    #[error("no solution: {0}")]
    NoSolution(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
