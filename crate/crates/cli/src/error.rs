use serde_json::{json, Value as Json};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Core(zpgabor_core::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Format(String),
    #[error("{0}")]
    Usage(String),
}

impl From<zpgabor_core::Error> for CliError {
    fn from(e: zpgabor_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.code(),
            CliError::Io { .. } => "io",
            CliError::Format(_) => "format",
            CliError::Usage(_) => "usage",
        }
    }

    /// The stderr document.
    pub fn to_json(&self, context: &str) -> Json {
        json!({ "code": self.code(), "message": self.to_string(), "context": context })
    }
}
