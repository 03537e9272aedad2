use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("undefined {0}")]
    Undefined(String),

    #[error("line {line}, column {column}: undefined {what}")]
    UndefinedAt { what: String, line: usize, column: usize },

    #[error("line {line}, column {column}: duplicate name \"{name}\"")]
    Duplicate { name: String, line: usize, column: usize },

    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Io(String),

    #[error(transparent)]
    Core(#[from] mfkit::Error),
}

impl CliError {
    /// 1 for mathematical failures, 2 for misuse or bad input (including
    /// unmet preconditions such as differing potentials), 3 when a
    /// computation ran out of degrees or steps.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(mfkit::Error::NotStabilized { .. } | mfkit::Error::BudgetExhausted(_)) => 3,
            CliError::Core(
                mfkit::Error::Parse { .. }
                | mfkit::Error::UnknownVariable(_)
                | mfkit::Error::VariableCollision(_)
                | mfkit::Error::VariableMismatch { .. }
                | mfkit::Error::PotentialMismatch { .. }
                | mfkit::Error::KindMismatch(_)
                | mfkit::Error::ParameterOutOfRange(_),
            ) => 2,
            CliError::Core(_) => 1,
            _ => 2,
        }
    }
}
