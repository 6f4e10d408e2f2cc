use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{path}: line {line}: {field}: {message}")]
    Parse { path: PathBuf, line: u64, field: String, message: String },

    #[error("{0}")]
    Config(String),

    #[error("{path}: {message}")]
    Checkpoint { path: PathBuf, message: String },

    #[error("{0}")]
    Usage(String),

    #[error("{path}: {message}")]
    Shape { path: PathBuf, message: String },

    #[error("workflow {workflow} has {tasks} tasks; the exact solver accepts at most {limit}")]
    TooLarge { workflow: String, tasks: usize, limit: usize },

    #[error("workflow {workflow}, policy {policy}: trace violation: {detail}")]
    Violation { workflow: String, policy: String, detail: String },

    #[error(transparent)]
    Core(#[from] fogflow_core::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// Short stable tag for the error class.
    pub fn kind(&self) -> &'static str {
        use fogflow_core::Error as C;
        match self {
            Error::Io { .. } => "io",
            Error::Parse { .. } => "parse",
            Error::Config(_) => "config",
            Error::Checkpoint { .. } => "checkpoint",
            Error::Usage(_) => "usage",
            Error::Violation { .. } => "violation",
            Error::Shape { .. } => "shape",
            Error::TooLarge { .. } => "size",
            Error::Core(C::Config(_)) => "config",
            Error::Core(C::ShapeMismatch(_) | C::DimensionMismatch { .. }) => "shape",
            Error::Core(C::InstanceTooLarge { .. }) => "size",
            Error::Core(C::SchedulingFailure { .. }) => "infeasible",
            Error::Core(_) => "core",
        }
    }

    /// `error kind=<kind> msg="<message>"` on a single line.
    pub fn one_line(&self) -> String {
        let msg = self.to_string().replace(['\n', '\r'], " ").replace('"', "'");
        format!("error kind={} msg=\"{msg}\"", self.kind())
    }
}
