use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// The bump profile could not be tuned so that all four defining conditions hold.
    #[error("bump profile construction infeasible: {0}")]
    ConstructionInfeasible(String),

    /// A monotone branch of a fiber lift failed to bracket its target value.
    #[error("root bracketing failed on fiber branch: target {target}, branch range [{lo}, {hi}]")]
    RootBracket { target: f64, lo: f64, hi: f64 },

    /// The operation is only meaningful on part of the parameter space.
    #[error("parameter outside domain: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Bisection was asked to work on an interval whose endpoint signs agree.
    #[error("no sign change in bracket [{lo}, {hi}]: chi_c = {chi_lo} and {chi_hi}")]
    NoBracket {
        lo: f64,
        hi: f64,
        chi_lo: f64,
        chi_hi: f64,
    },

    /// The dense eigenvalue solver did not converge.
    #[error("eigenvalue solver did not converge on a {0}x{0} matrix")]
    EigenSolve(usize),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("config: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Whether the error is a user configuration problem rather than a numerical one.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config(_) | Error::InvalidInput(_) | Error::Domain(_))
    }
}
