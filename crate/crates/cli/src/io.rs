//! Input loading and the error type that decides the exit code.

use std::fmt;
use std::path::Path;

use lyapcheck_core::consensus::{GraphSequence, SequenceFileError};
use lyapcheck_core::interchange::{mat_from_json, mats_from_json, vec_from_json, AnyMat, AnyVec};
use serde_json::Value;

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or invalid input; exit code 2.
    Input(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<lyapcheck_core::Error> for CliError {
    fn from(e: lyapcheck_core::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

pub fn input<E: fmt::Display>(context: &str) -> impl FnOnce(E) -> CliError + '_ {
    move |e| CliError::Input(format!("{context}: {e}"))
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Formats a JSON syntax error with the offending line and a caret.
pub fn json_error(path: &Path, text: &str, e: &serde_json::Error) -> CliError {
    let (line, col) = (e.line(), e.column());
    let mut msg = format!("{}:{line}:{col}: malformed JSON: {e}", path.display());
    if let Some(src) = text.lines().nth(line.saturating_sub(1)) {
        msg.push_str(&format!("\n  {line:>4} | {src}\n       | {}^", " ".repeat(col.saturating_sub(1))));
    }
    CliError::Input(msg)
}

pub fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| json_error(path, &text, &e))
}

pub fn read_matrix(path: &Path) -> Result<AnyMat, CliError> {
    mat_from_json(&read_json(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn read_matrices(path: &Path) -> Result<Vec<AnyMat>, CliError> {
    let list = mats_from_json(&read_json(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    if list.is_empty() {
        return Err(CliError::Input(format!("{}: no matrices", path.display())));
    }
    Ok(list)
}

pub fn read_vector(path: &Path) -> Result<AnyVec, CliError> {
    vec_from_json(&read_json(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn read_sequence(path: &Path) -> Result<GraphSequence, CliError> {
    let text = read_text(path)?;
    GraphSequence::from_json_str(&text).map_err(|e| match e {
        SequenceFileError::Json(j) => json_error(path, &text, &j),
        SequenceFileError::Invalid(err) => CliError::Input(format!("{}: {err}", path.display())),
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}
