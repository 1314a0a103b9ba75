use std::fmt;
use std::path::Path;
use std::process::ExitCode;

use hellinger_core::families::GaussianParams;
use hellinger_core::{Error, Measure};

/// Failures mapped onto the process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable file, malformed JSON or an incompatible flag combination.
    Input(String),
    /// Well-formed input describing an object outside the valid domain.
    Domain(String),
    Core(Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Input(_) => ExitCode::from(2),
            CliError::Domain(_) => ExitCode::from(3),
            CliError::Core(Error::NoConvergence { .. }) => ExitCode::from(4),
            CliError::Core(_) => ExitCode::from(3),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) | CliError::Domain(msg) => f.write_str(msg),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn parse_err(path: &Path, e: impl fmt::Display) -> CliError {
    CliError::Input(format!("{}: {e}", path.display()))
}

/// Reads a measure file. A JSON document that parses but describes an
/// invalid measure (for example a negative weight) is a domain error.
pub fn measure(path: &Path) -> CliResult<Measure> {
    let text = read(path)?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| parse_err(path, e))?;
    serde_json::from_value(value).map_err(|e| {
        let msg = e.to_string();
        if msg.starts_with("invalid measure") {
            CliError::Domain(format!("{}: {msg}", path.display()))
        } else {
            parse_err(path, msg)
        }
    })
}

/// Reads a parameter vector: a JSON array of numbers.
pub fn params(path: &Path) -> CliResult<Vec<f64>> {
    serde_json::from_str(&read(path)?).map_err(|e| parse_err(path, e))
}

pub fn gaussian(path: &Path) -> CliResult<GaussianParams> {
    let text = read(path)?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| parse_err(path, e))?;
    serde_json::from_value(value).map_err(|e| {
        let msg = e.to_string();
        if msg.contains("positive definite") || msg.starts_with("dimension mismatch") {
            CliError::Domain(format!("{}: {msg}", path.display()))
        } else {
            parse_err(path, msg)
        }
    })
}

pub fn grid_profile(path: Option<&Path>) -> CliResult<hellinger_core::GridMeasure> {
    let path = path.ok_or_else(|| CliError::Input("the trans family needs --profile <grid measure>".into()))?;
    match measure(path)? {
        Measure::Grid(g) => Ok(g),
        Measure::Discrete(_) => Err(CliError::Input(format!("{}: profile must be a grid measure", path.display()))),
    }
}
