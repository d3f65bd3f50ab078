use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("integration on [{lo}, {hi}] did not converge: achieved error estimate {achieved:e}")]
    Integration { lo: f64, hi: f64, achieved: f64 },

    #[error("backend unsupported: {0}")]
    Unsupported(String),

    #[error("level {level}, region {index}: {source}")]
    AtRegion {
        level: u32,
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid distribution spec: {0}")]
    Spec(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn at_region(self, level: u32, index: usize) -> Self {
        Error::AtRegion {
            level,
            index,
            source: Box::new(self),
        }
    }
}
