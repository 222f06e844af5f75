//! Error type shared across the crate.
//!
//! Numerical positions are stored as f64 regardless of the solver scalar;
//! they are diagnostics, not data.

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("invalid {what}: {why}")]
    InvalidInput { what: &'static str, why: String },

    #[error("x = {x} lies outside the working interval [{lo}, {hi}]")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },

    #[error("integration step underflow at x = {x} (h = {h:.3e})")]
    IntegrationFailure { x: f64, h: f64 },

    #[error("no bracket for eigenvalue {index}: search exhausted at |E| ~ {bound:.3e}")]
    SearchBound { index: usize, bound: f64 },

    #[error(
        "terminal angle not monotone in the coupling on [{lo}, {hi}]; \
         the coupling bump must be nonnegative with positive mass"
    )]
    InvalidBump { lo: f64, hi: f64 },

    #[error("degenerate eigenfunction data: value and derivative both vanish")]
    DegenerateEigenfunction,

    #[error("experiment produced no successful trials")]
    EmptyExperiment,

    #[error("trial {trial} (seed {seed}) failed: {source}")]
    Trial {
        trial: usize,
        seed: u64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid(what: &'static str, why: impl Into<String>) -> Self {
        Error::InvalidInput { what, why: why.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
