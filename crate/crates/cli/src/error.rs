use std::fmt;

/// A failure with its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
    /// Set when the failure was a write to a closed pipe.
    pub broken_pipe: bool,
}

pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_CONFIG,
            message: message.into(),
            broken_pipe: false,
        }
    }

    pub fn validation(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_VALIDATION,
            message: message.into(),
            broken_pipe: false,
        }
    }

    pub fn io(e: std::io::Error) -> Self {
        Self {
            broken_pipe: e.kind() == std::io::ErrorKind::BrokenPipe,
            ..Self::config(format!("i/o error: {e}"))
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<semicurv::Error> for CliError {
    fn from(e: semicurv::Error) -> Self {
        use semicurv::Error::*;
        let code = match &e {
            InvalidAlgebra(_)
            | InvalidAction(_)
            | DegeneratePlane { .. }
            | NotIsometric
            | NotAdInvariant
            | NotDivergenceFree { .. } => EXIT_VALIDATION,
            MidpointDivergence { .. } | SamplingExhausted { .. } => EXIT_NUMERICAL,
            DimensionMismatch { .. } | Config(_) => EXIT_CONFIG,
        };
        Self {
            code,
            message: e.to_string(),
            broken_pipe: false,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Self::io(io),
            other => Self::config(format!("csv output error: {other:?}")),
        }
    }
}
