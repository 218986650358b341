use thiserror::Error;

/// Errors raised by the reconstruction library.
#[derive(Debug, Error)]
pub enum OpedError {
    /// A parameter lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An index or degree exceeds what a table was built for.
    #[error("range error: {0}")]
    Range(String),

    /// An adaptive integration did not reach the requested tolerance.
    #[error("tolerance not met ({context}): last estimate {last:e}, previous {previous:e}")]
    ToleranceNotMet {
        context: String,
        last: f64,
        previous: f64,
    },

    /// The tridiagonal eigen-solver failed to converge.
    #[error("eigen-solver did not converge for {rule} with {nodes} nodes")]
    EigenNonConvergence { rule: String, nodes: usize },

    /// Inputs with inconsistent shapes or metadata.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// Malformed or unencodable file contents.
    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl OpedError {
    /// Attach context to a tolerance failure raised deeper in the stack.
    pub fn with_context(self, ctx: impl Into<String>) -> Self {
        match self {
            OpedError::ToleranceNotMet {
                context,
                last,
                previous,
            } => OpedError::ToleranceNotMet {
                context: format!("{}: {}", ctx.into(), context),
                last,
                previous,
            },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, OpedError>;
