use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid physical parameters: {0}")]
    InvalidParams(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid step control: {0}")]
    InvalidControl(String),

    #[error("time step must be positive, got {0:e}")]
    NonPositiveDt(f64),

    #[error("non-finite value at step {step}, cell {cell} (t = {time:e})")]
    NonFinite { step: usize, cell: usize, time: f64 },

    #[error("length mismatch: expected {expected} cells, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("cannot restrict a grid with an odd cell count ({0})")]
    OddCellCount(usize),

    #[error("self-similar comparison needs a doubling ladder, got {coarse} -> {fine}")]
    NotDoubling { coarse: usize, fine: usize },

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),

    #[error("problem `{0}` has no analytic reference solution")]
    NoReference(String),

    #[error("at N = {n_cell}: {source}")]
    AtResolution {
        n_cell: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// True for failures of the numerical solution itself, as opposed to a
    /// bad configuration.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::NonFinite { .. } => true,
            Error::AtResolution { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}
