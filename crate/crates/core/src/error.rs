use thiserror::Error;

/// Errors raised by the numerical routines and the channel-spec loader.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("vector is not normalized (norm {0})")]
    Normalization(f64),

    #[error("invalid density operator: {0}")]
    InvalidState(String),

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("matrix is not an isometry (max deviation of U*U from I is {0:e})")]
    NotIsometry(f64),

    #[error("basis is not orthonormal (max Gram deviation {0:e})")]
    NotOrthonormal(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },

    #[error("unknown channel type `{0}`")]
    UnknownPreset(String),

    #[error("POVM elements do not sum to the identity (max deviation {0:e})")]
    PovmIncomplete(f64),

    #[error("operator is not a POVM element: {0}")]
    InvalidPovmElement(String),

    #[error("hypothesis not satisfied: {0}")]
    Inapplicable(String),

    #[error("truncation removes the whole Schmidt weight")]
    DegenerateTruncation,

    #[error("problem size out of range: {0}")]
    Scale(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            message: message.into(),
        }
    }
}
