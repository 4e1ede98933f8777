use std::path::PathBuf;

use crate::expr::{DomainError, ParseError};

/// Process exit codes used by the command-line front end.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const VERDICT_FAILURE: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const DEGENERATE: i32 = 3;
    pub const DOMAIN: i32 = 4;
    pub const RANK: i32 = 5;
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{context}: {source}")]
    Expr { context: String, source: ParseError },
    #[error("scenario error{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Scenario {
        line: Option<usize>,
        message: String,
    },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("{context}: {source}")]
    Domain {
        context: String,
        source: DomainError,
    },
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("rank inconsistency: {0}")]
    Rank(String),
    #[error("invalid report: {0}")]
    Report(String),
    #[error(
        "ambient structure rejected: {identity} fails with residual {residual:.3e} at {point:?}"
    )]
    Structure {
        identity: String,
        residual: f64,
        point: Vec<f64>,
    },
}

impl Error {
    pub fn scenario(message: impl Into<String>) -> Self {
        Error::Scenario {
            line: None,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. }
            | Error::Expr { .. }
            | Error::Scenario { .. }
            | Error::Dimension(_)
            | Error::Report(_) => exit::INPUT,
            Error::Degenerate(_) => exit::DEGENERATE,
            Error::Domain { .. } => exit::DOMAIN,
            Error::Rank(_) => exit::RANK,
            Error::Structure { .. } => exit::VERDICT_FAILURE,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) trait DomainContext<T> {
    fn at(self, context: impl FnOnce() -> String) -> Result<T>;
}

impl<T> DomainContext<T> for std::result::Result<T, DomainError> {
    fn at(self, context: impl FnOnce() -> String) -> Result<T> {
        self.map_err(|source| Error::Domain {
            context: context(),
            source,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_classes_have_distinct_codes() {
        let codes = [
            Error::scenario("x").exit_code(),
            Error::Degenerate("x".into()).exit_code(),
            Error::Domain {
                context: "c".into(),
                source: DomainError {
                    kind: crate::expr::DomainErrorKind::DivisionByZero,
                    subexpr: "1/u".into(),
                },
            }
            .exit_code(),
            Error::Rank("x".into()).exit_code(),
        ];
        assert_eq!(
            codes,
            [exit::INPUT, exit::DEGENERATE, exit::DOMAIN, exit::RANK]
        );
        let e = Error::Scenario {
            line: Some(7),
            message: "bad".into(),
        };
        assert_eq!(e.to_string(), "scenario error at line 7: bad");
    }
}
