use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Budget,
    Verification,
    Module,
    Io,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Config => 2,
            ErrorKind::Budget => 3,
            ErrorKind::Verification => 4,
            ErrorKind::Module | ErrorKind::Io => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ErrorKind::Config => "config",
            ErrorKind::Budget => "budget",
            ErrorKind::Verification => "verification",
            ErrorKind::Module => "module",
            ErrorKind::Io => "io",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Config,
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Io,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.kind.exit_code()
    }

    /// Single-line JSON record for stderr.
    pub fn to_json(&self) -> String {
        serde_json::json!({
            "error": self.kind.name(),
            "message": self.message,
            "exit_code": self.exit_code(),
        })
        .to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} error: {}", self.kind.name(), self.message)
    }
}

impl std::error::Error for CliError {}

impl From<waring_core::Error> for CliError {
    fn from(e: waring_core::Error) -> Self {
        let kind = match e {
            waring_core::Error::Budget { .. } => ErrorKind::Budget,
            _ => ErrorKind::Module,
        };
        Self {
            kind,
            message: e.to_string(),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
