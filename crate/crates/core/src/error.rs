use thiserror::Error;

/// Every fallible operation in the crate reports one of these.
#[derive(Debug, Error)]
pub enum GcError {
    /// The requested scheme cannot exist (or this construction cannot build it).
    #[error("construction infeasible: {0}")]
    Infeasible(String),
    #[error("invalid parameters: {0}")]
    Parameter(String),
    #[error("malformed scheme: {}", .0.join("; "))]
    Structural(Vec<String>),
    #[error("invalid design: {0}")]
    Design(String),
    /// Exhaustive verification was asked for on an instance that is too big.
    #[error("oracle input too large: {0}")]
    TooLarge(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("infinite mean: {0}")]
    InfiniteMean(String),
    /// A decoder could not produce a certificate. For the constructed families
    /// this means a bug, since existence is guaranteed.
    #[error("decoding failed: {0}")]
    Decode(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = GcError> = std::result::Result<T, E>;
