//! Configuration, orchestration and reporting for the `holoherm` command.

pub mod config;
pub mod pipeline;
pub mod report;

pub use config::{RunConfig, TolProfile, XSpec};
pub use pipeline::{run_example, run_verify, Example, Options};
pub use report::VerificationReport;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error at {path}: {message}")]
    Config { path: String, message: String },
    /// A library error; `input` marks stages that only reject bad input data.
    #[error("stage {stage} failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: holoherm::Error,
        input: bool,
    },
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    /// 2 for unusable input, 1 for failures inside verification.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config { .. } | CliError::Io(_) => 2,
            CliError::Stage { input, .. } => {
                if *input {
                    2
                } else {
                    1
                }
            }
        }
    }
}
