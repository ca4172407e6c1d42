use thiserror::Error;

/// Errors surfaced by the analysis pipelines.
///
/// Every variant maps to a stable machine-readable code (see [`Error::code`]) and
/// to a process exit status used by the command-line front end.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// A hypothesis of the analysed statement does not hold for the input.
    #[error("{hypothesis}: {detail}")]
    Precondition {
        hypothesis: &'static str,
        detail: String,
    },

    /// Argument outside the domain of a formula.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("no convergence: {0}")]
    NonConvergence(String),

    #[error("invalid JSON input: {0}")]
    Json(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn precondition(hypothesis: &'static str, detail: impl Into<String>) -> Self {
        Error::Precondition {
            hypothesis,
            detail: detail.into(),
        }
    }

    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse_error",
            Error::Precondition { .. } => "precondition_failed",
            Error::Domain(_) => "domain_error",
            Error::NonConvergence(_) => "non_convergence",
            Error::Json(_) => "invalid_json",
            Error::Io(_) => "io_error",
        }
    }

    /// Exit status: 2 for problems with the input, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Precondition { .. } | Error::Domain(_) | Error::Json(_) => 2,
            Error::NonConvergence(_) | Error::Io(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
