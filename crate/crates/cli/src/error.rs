use thiserror::Error;

/// Errors surfaced by the command-line front end.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),

    #[error("preset `experimental` needs a config file with `theta_experimental_rad`")]
    MissingPreset,

    #[error("{0}")]
    Library(#[from] nuqet::Error),

    #[error("{0}")]
    Io(#[from] std::io::Error),

    #[error("{failed} numerical check(s) failed")]
    ChecksFailed { failed: usize },
}

impl CliError {
    pub fn validation(msg: impl Into<String>) -> Self {
        Self::Validation(msg.into())
    }

    /// 1 for bad input, 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        use nuqet::Error as E;
        match self {
            Self::Validation(_) | Self::MissingPreset | Self::Io(_) => 1,
            Self::Library(
                E::InvalidConfig(_)
                | E::NegativeTime(_)
                | E::NegativeRate(_)
                | E::ZeroMeasurements
                | E::DegenerateAngle(_)
                | E::MixedStateUnsupported(_),
            ) => 1,
            Self::Library(_) | Self::ChecksFailed { .. } => 2,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
