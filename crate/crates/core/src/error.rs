use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid carpet spec: {0}")]
    InvalidSpec(String),

    #[error("failed to parse spec: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("level {level} needs {cells} cells, over the budget of {budget}")]
    Budget { level: u32, cells: u128, budget: u64 },

    #[error("symmetry {symmetry} maps cell {cell:?} outside the cell set")]
    NotAutomorphism { symmetry: String, cell: Vec<u64> },

    #[error("conjugate gradient stopped after {iterations} iterations, best relative residual {best_residual:e}")]
    NoConvergence { iterations: usize, best_residual: f64 },

    #[error("free cell #{cell} lies in a component with no pinned cell")]
    IsolatedComponent { cell: usize },

    #[error("random walk exceeded {limit} steps in trial {trial}")]
    WalkLimit { trial: u64, limit: u64 },

    #[error("function has zero energy, energy profile is empty")]
    EmptyProfile,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 usage/parse, 3 resource, 4 numerical.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Budget { .. } => 3,
            Error::NoConvergence { .. }
            | Error::IsolatedComponent { .. }
            | Error::WalkLimit { .. }
            | Error::EmptyProfile => 4,
            _ => 2,
        }
    }
}
