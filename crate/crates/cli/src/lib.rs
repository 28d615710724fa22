//! Command-line driver: config ingestion, report files, the decomposition
//! helper and the SL(2, R) cone example.

pub mod commands;
pub mod config;
pub mod report;
pub mod sl2_example;

use flagtype::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const IO: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const VALIDATION: i32 = 3;
    pub const INCONCLUSIVE: i32 = 4;
    pub const NUMERIC: i32 = 5;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Parse(_) => exit::PARSE,
            Self::Validation(_) => exit::VALIDATION,
            Self::Numeric(_) => exit::NUMERIC,
            Self::Io(_) => exit::IO,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NonFinite
            | Error::Singular
            | Error::NotRegular { .. }
            | Error::RejectionBudgetExhausted { .. }
            | Error::NoRegularWordFound { .. } => Self::Numeric(e.to_string()),
            _ => Self::Validation(e.to_string()),
        }
    }
}
