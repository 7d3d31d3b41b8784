use thiserror::Error;

/// Input problems exit with 2, violated invariants with 1.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Invariant(_) => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Failures of core computations on an already loaded fixture.
pub fn invariant(at: &'static str) -> impl Fn(hodge_core::HodgeError) -> CliError {
    move |e| CliError::Invariant(format!("{at}: {e}"))
}
