use std::path::PathBuf;

use thiserror::Error;

/// Failure of one scenario. Each class maps to its own process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: syntax error: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown key `{key}`: {message}")]
    UnknownKey {
        line: usize,
        key: String,
        message: String,
    },
    #[error("{}invalid value: {message}", line_prefix(*line))]
    Invariant {
        line: Option<usize>,
        message: String,
    },
    #[error("{0}")]
    Module(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

fn line_prefix(line: Option<usize>) -> String {
    match line {
        Some(l) => format!("line {l}: "),
        None => String::new(),
    }
}

impl CliError {
    pub const EXIT_SYNTAX: u8 = 10;
    pub const EXIT_UNKNOWN_KEY: u8 = 11;
    pub const EXIT_INVARIANT: u8 = 12;
    pub const EXIT_MODULE: u8 = 20;
    pub const EXIT_IO: u8 = 30;

    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Syntax { .. } => Self::EXIT_SYNTAX,
            Self::UnknownKey { .. } => Self::EXIT_UNKNOWN_KEY,
            Self::Invariant { .. } => Self::EXIT_INVARIANT,
            Self::Module(_) => Self::EXIT_MODULE,
            Self::Io { .. } => Self::EXIT_IO,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn module(err: impl std::fmt::Display) -> Self {
        Self::Module(err.to_string())
    }
}
