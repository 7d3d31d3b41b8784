//! Library side of the `hodge` command: fixture files, commands and reports.

pub mod commands;
pub mod error;
pub mod fixture;
pub mod report;

pub use commands::{Options, Outcome, Probe, Suite};
pub use error::{CliError, CliResult};
pub use fixture::{Fixture, FixtureFile};
pub use report::Report;

/// Read and validate a fixture file.
pub fn load(path: &std::path::Path) -> CliResult<Fixture> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    FixtureFile::parse(&text)
        .map_err(|e| match e {
            CliError::Input(m) => CliError::Input(format!("{}: {m}", path.display())),
            other => other,
        })?
        .load()
}
