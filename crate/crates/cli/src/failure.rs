use serde::Serialize;
use tevl_core::Error;

pub const EXIT_SCHEMA: u8 = 2;
pub const EXIT_INADMISSIBLE: u8 = 3;
pub const EXIT_NUMERICAL: u8 = 4;
pub const EXIT_EMPTY: u8 = 5;

/// Structured diagnostic written to stderr as one JSON object.
#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub error: &'static str,
    pub exit_code: u8,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

impl Failure {
    pub fn schema(message: impl Into<String>, path: Option<String>) -> Self {
        Self { error: "schema", exit_code: EXIT_SCHEMA, message: message.into(), path }
    }

    pub fn empty(message: impl Into<String>) -> Self {
        Self { error: "empty_result", exit_code: EXIT_EMPTY, message: message.into(), path: None }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self { error: "io", exit_code: 1, message: message.into(), path: None }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (error, exit_code) = match &e {
            Error::DimensionMismatch { .. }
            | Error::InvalidArgument(_)
            | Error::Parse { .. }
            | Error::InvalidConfig(_) => ("schema", EXIT_SCHEMA),
            Error::Inadmissible(_) => ("inadmissible", EXIT_INADMISSIBLE),
            Error::Window(_) => ("empty_result", EXIT_EMPTY),
            Error::Domain(_)
            | Error::Unstable { .. }
            | Error::Numerical(_)
            | Error::SpuriousRoot { .. }
            | Error::Geometry(_) => ("numerical", EXIT_NUMERICAL),
        };
        Self { error, exit_code, message: e.to_string(), path: None }
    }
}
