use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable lists differ: [{left}] vs [{right}]")]
    VariableMismatch { left: String, right: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("variable `{0}` already in use")]
    VariableCollision(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("potentials differ: {left} vs {right}")]
    PotentialMismatch { left: String, right: String },

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("matrix is not invertible at the origin: {0}")]
    NotInvertible(String),

    #[error("structure kinds differ: {0}")]
    KindMismatch(String),

    #[error("singularity is not isolated: Tjurina algebra of {0} is infinite-dimensional")]
    NonIsolated(String),

    #[error("dimensions did not stabilize up to degree {max_degree} (history: {history})")]
    NotStabilized { max_degree: usize, history: String },

    #[error("step budget of {0} exhausted")]
    BudgetExhausted(u64),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("invertible structure is not unique: {0}")]
    NonUnique(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}
