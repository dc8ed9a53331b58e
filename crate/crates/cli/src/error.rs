use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] z2sim::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 config, 3 capacity, 4 numerical convergence, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        use z2sim::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Core(e) => match e {
                E::Capacity { .. } => 3,
                E::Convergence { .. } | E::DegenerateGround(_) => 4,
                E::InvalidInput(_)
                | E::OutOfRange { .. }
                | E::DegenerateGradient(_)
                | E::SizeMismatch(..) => 2,
                _ => 1,
            },
            CliError::Io(_) => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
