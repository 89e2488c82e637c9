use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed textual input (cycle notation, rationals, JSON shapes).
    #[error("parse error: {0}")]
    Parse(String),

    /// Missing or conflicting command-line options.
    #[error("usage error: {0}")]
    Usage(String),

    /// A permutation moves a point outside the window it is used with.
    #[error("permutation {perm} moves point {point} outside window 1..={window}")]
    WindowEscape {
        perm: String,
        point: usize,
        window: usize,
    },

    /// A computation would exceed a configured size cap.
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    /// Inputs are well formed but outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Weight parameters failed validation.
    #[error("invalid alpha: {0}")]
    InvalidAlpha(String),

    /// A finite action table violates the action axioms.
    #[error("invalid action: {0}")]
    InvalidAction(String),

    /// An invariant that exhaustive construction guarantees was violated.
    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for errors caused by malformed user input rather than a domain failure.
    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse",
            Error::Usage(_) => "usage",
            Error::WindowEscape { .. } => "window_escape",
            Error::SizeLimit(_) => "size_limit",
            Error::Domain(_) => "domain",
            Error::InvalidAlpha(_) => "invalid_alpha",
            Error::InvalidAction(_) => "invalid_action",
            Error::Internal(_) => "internal",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }

    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::Usage(_) | Error::Json(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
