//! File formats, SVG output, commands and the HTTP query service behind the
//! `hvd` binary.

pub mod commands;
pub mod formats;
pub mod service;
pub mod svg;

use formats::RecordError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid input:\n{}", list_records(.0))]
    InvalidRecords(Vec<RecordError>),
    #[error("input has no points")]
    EmptyInput,
    #[error("invalid scene: {0}")]
    InvalidScene(String),
    #[error("{0}")]
    Geometry(#[from] hvd_core::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

fn list_records(errors: &[RecordError]) -> String {
    errors
        .iter()
        .map(|e| format!("  {e}"))
        .collect::<Vec<_>>()
        .join("\n")
}
