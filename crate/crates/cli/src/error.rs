use serde::Serialize;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Unknown subcommand or flag, or a malformed value.
    Usage(String),
    /// Arguments parse but violate a precondition.
    Validation(String),
    /// A file could not be read or written.
    Io(String),
    /// A computation failed to converge or hit a singular case.
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Validation(_) => 2,
            CliError::Io(_) => 3,
            CliError::Compute(_) => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Validation(_) => "validation",
            CliError::Io(_) => "io",
            CliError::Compute(_) => "compute",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Validation(m) | CliError::Io(m) | CliError::Compute(m) => m,
        }
    }

    /// One-line JSON object for standard error.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Body<'a> {
            kind: &'a str,
            message: &'a str,
        }
        #[derive(Serialize)]
        struct Wrapper<'a> {
            error: Body<'a>,
        }
        serde_json::to_string(&Wrapper { error: Body { kind: self.kind(), message: self.message() } })
            .expect("error serializes")
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} error: {}", self.kind(), self.message())
    }
}

impl std::error::Error for CliError {}

impl From<caustics::Error> for CliError {
    fn from(e: caustics::Error) -> Self {
        use caustics::Error::*;
        match e {
            Domain(_) | Structural(_) | Convexity(_) => CliError::Validation(e.to_string()),
            NonConvergence { .. } | Geometry(_) | Search(_) | Singular(_) => CliError::Compute(e.to_string()),
        }
    }
}
