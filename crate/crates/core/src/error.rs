use std::path::PathBuf;

/// Errors raised by the library. The variants group into three classes
/// (configuration, data, numerical) which the command-line tool maps onto
/// distinct exit codes.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{op}: argument out of domain ({detail})")]
    Domain { op: &'static str, detail: String },

    #[error("{op}: series did not reach tolerance {tol:e} within {terms} terms")]
    Truncation { op: &'static str, terms: usize, tol: f64 },

    #[error("{op}: t = {t} needs n up to e^t but the table stops at {limit}")]
    Range { op: &'static str, t: f64, limit: u64 },

    #[error("sieve limit {limit} exceeds the configured budget of {budget}")]
    Capacity { limit: u64, budget: u64 },

    #[error("{op}: adaptive quadrature did not converge (error {err:e} > {tol:e})")]
    Quadrature { op: &'static str, err: f64, tol: f64 },

    #[error("{op}: {detail}")]
    Numerical { op: &'static str, detail: String },

    #[error("{op}: needs {needed} entries, only {have} available")]
    Insufficient { op: &'static str, needed: usize, have: usize },

    #[error("{}:{line}: {msg}", path.display())]
    Parse { path: PathBuf, line: usize, msg: String },

    #[error("{}: {msg}", path.display())]
    Data { path: PathBuf, msg: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Coarse classification used for process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorClass {
    Config,
    Data,
    Numerical,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Domain { .. } | Error::Range { .. } | Error::Capacity { .. } => ErrorClass::Config,
            Error::Parse { .. } | Error::Data { .. } | Error::Io { .. } => ErrorClass::Data,
            Error::Truncation { .. }
            | Error::Quadrature { .. }
            | Error::Numerical { .. }
            | Error::Insufficient { .. } => ErrorClass::Numerical,
        }
    }

    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain { op, detail: detail.into() }
    }

    pub(crate) fn numerical(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Numerical { op, detail: detail.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
