//! Batch runner and file-level commands over the `projgeom` library.

pub mod commands;
pub mod error;
pub mod suite;

use std::path::Path;

use projgeom::io::parse_all;
use projgeom::{ComplexMatrix, ToleranceConfig};

pub use error::CliError;
pub use suite::{run_suite, Suite, SuiteConfig, SuiteReport};

/// Applies `name=value` overrides to the default thresholds.
pub fn tolerances(overrides: &[String]) -> Result<ToleranceConfig, CliError> {
    overrides.iter().try_fold(ToleranceConfig::default(), |tol, spec| {
        tol.with_override(spec).map_err(|e| CliError::Usage(format!("--tol {spec}: {e}")))
    })
}

pub fn read_matrices(path: &Path) -> Result<Vec<ComplexMatrix>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    parse_all(&text).map_err(|source| CliError::Parse { path: path.into(), source })
}

/// Writes to `path`, or to standard output when absent.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io { path: p.into(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
