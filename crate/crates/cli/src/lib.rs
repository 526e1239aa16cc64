//! Library side of the `choquet` command: dataset I/O and the `aggregate`
//! and `verify` commands, exposed for the binary and its tests.

pub mod aggregate;
pub mod dataset;
pub mod error;
pub mod verify;

pub use error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

/// Writes `text` to `path`, or to stdout when `path` is `None`.
pub fn emit(path: Option<&std::path::Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::io("<stdout>", e))
        }
    }
}
