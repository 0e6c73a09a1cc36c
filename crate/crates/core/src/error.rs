use thiserror::Error;

/// Errors produced by the solvers, the simulator and the CLI plumbing.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter failed basic range validation (bad flag value, empty
    /// range, forced masses summing to one, ...).
    #[error("{0}")]
    InvalidParameter(String),

    /// An argument lies outside the mathematical domain of an operation.
    #[error("{0}")]
    Domain(String),

    /// The sophistication parameter is too low for the simple-disclosure
    /// region to be nonempty.
    #[error("q = {q} must exceed 2/3 for an interior equilibrium")]
    NoInteriorEquilibrium { q: f64 },

    /// The price sensitivities do not satisfy chi*rho_u < rho_s < chi.
    #[error("slope ordering violated: obfuscated {obfuscated}, simple {simple}, informative {informative}")]
    InvalidOrdering {
        obfuscated: f64,
        simple: f64,
        informative: f64,
    },

    #[error("no convergence after {iterations} iterations (last residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("message {0} is sent with probability zero")]
    OffPathMessage(String),

    /// Model and equilibrium passed to the simulator do not match.
    #[error("{0}")]
    Config(String),

    #[error("{0}")]
    Io(String),

    /// Command line could not be parsed.
    #[error("{0}")]
    Usage(String),
}

impl Error {
    /// Machine-parsable code printed by the CLI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "INVALID_PARAMETER",
            Error::Domain(_) => "DOMAIN_ERROR",
            Error::NoInteriorEquilibrium { .. } => "NO_INTERIOR_EQUILIBRIUM",
            Error::InvalidOrdering { .. } => "INVALID_ORDERING",
            Error::NoConvergence { .. } => "NO_CONVERGENCE",
            Error::OffPathMessage(_) => "OFF_PATH_MESSAGE",
            Error::Config(_) => "CONFIG_ERROR",
            Error::Io(_) => "IO_ERROR",
            Error::Usage(_) => "USAGE_ERROR",
        }
    }

    /// Process exit code: 1 usage/validation, 2 model domain, 3 non-convergence.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter(_) | Error::Config(_) | Error::Io(_) | Error::Usage(_) => 1,
            Error::Domain(_)
            | Error::NoInteriorEquilibrium { .. }
            | Error::InvalidOrdering { .. }
            | Error::OffPathMessage(_) => 2,
            Error::NoConvergence { .. } => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
