use std::fmt;

use serde::Serialize;

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    CheckFailed,
    InvalidInput,
    NumericalAbort,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Self::Ok => 0,
            Self::CheckFailed => 1,
            Self::InvalidInput => 2,
            Self::NumericalAbort => 3,
        }
    }
}

/// A failed command: exit status plus a message.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub status: Status,
    pub message: String,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        Self {
            status: Status::InvalidInput,
            message: message.into(),
        }
    }

    /// `{"error": {"code", "kind", "message"}}`.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Body<'a> {
            code: i32,
            kind: Status,
            message: &'a str,
        }
        #[derive(Serialize)]
        struct Wrapper<'a> {
            error: Body<'a>,
        }
        serde_json::to_string(&Wrapper {
            error: Body {
                code: self.status.code(),
                kind: self.status,
                message: &self.message,
            },
        })
        .expect("plain data serializes")
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<eulerlab::Error> for CliError {
    fn from(e: eulerlab::Error) -> Self {
        use eulerlab::Error as E;
        let status = match e {
            E::NumericalBlowup { .. } | E::CflViolation { .. } => Status::NumericalAbort,
            _ => Status::InvalidInput,
        };
        Self {
            status,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::invalid(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::invalid(e.to_string())
    }
}
