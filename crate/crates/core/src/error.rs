use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("points do not affinely span the ambient space (rank {rank} < {dim})")]
    NotFullDimensional { rank: usize, dim: usize },
    #[error("point configuration is degenerate: {0}")]
    DegenerateConfiguration(String),
    #[error("all Lawrence prism heights are zero")]
    ZeroVolume,
    #[error("cone is not pointed")]
    NotPointed,
    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(u64),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("negative h* coefficient {index} ({value}); Ehrhart data is inconsistent")]
    NegativeCoefficient { index: usize, value: i128 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("format error at line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
