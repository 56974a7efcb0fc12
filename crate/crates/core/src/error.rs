use thiserror::Error;

/// Errors raised by the planning library and its tooling.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller violated an operation's precondition.
    #[error("usage error: {0}")]
    Usage(String),

    /// A problem definition or scenario failed validation.
    #[error("invalid {field}: {reason}")]
    Invalid { field: String, reason: String },

    /// Rejection sampling gave up.
    #[error("space saturated: no valid sample after {0} consecutive rejections")]
    SpaceSaturated(usize),

    /// Lookup of an id that is not (or no longer) present.
    #[error("unknown vertex id {0}")]
    UnknownId(usize),

    #[error("unknown world `{0}`")]
    UnknownWorld(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("scenario parse error: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Invalid {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
