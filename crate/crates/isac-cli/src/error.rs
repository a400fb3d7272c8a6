use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error at line {line}{}: {message}", if field.is_empty() { String::new() } else { format!(" ({field})") })]
    Config { line: usize, field: String, message: String },
    #[error("io error: {0}")]
    Io(String),
    #[error("{0}")]
    Core(#[from] isac_core::Error),
}

impl CliError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        2
    }
}
