use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("unknown problem id `{0}` (known: {1})")]
    UnknownProblem(String, String),

    #[error("problem id `{0}` is already registered")]
    DuplicateId(String),

    #[error("problem `{0}` has no closed-form reference; use --reference auto")]
    NoClosedForm(String),

    #[error("`{op}` does not apply to problem `{id}`: {reason}")]
    Unsupported {
        op: &'static str,
        id: String,
        reason: &'static str,
    },

    #[error("invalid setting: {0}")]
    InvalidSetting(String),

    #[error(transparent)]
    Solver(#[from] gbnystrom::Error),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

pub type Result<T> = std::result::Result<T, HarnessError>;

pub(crate) fn io_err(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> HarnessError {
    let path = path.into();
    move |source| HarnessError::Io { path, source }
}
