use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter out of range: {0}")]
    Domain(String),

    #[error("singular matrix (smallest singular value {min_sv:e}, largest {max_sv:e})")]
    SingularMatrix { min_sv: f64, max_sv: f64 },

    #[error("order {0} is not supported (maximum is 3)")]
    UnsupportedOrder(usize),

    #[error("stability function has a pole at z = {re} + {im}i")]
    Pole { re: f64, im: f64 },

    #[error("representation is not explicit")]
    NotExplicit,

    #[error("negative amplification coefficient gamma[{j}][{l}] = {value:e}")]
    NegativeGamma { j: usize, l: usize, value: f64 },

    #[error("method is still feasible at r = {cap:e}; SSP coefficient is effectively unbounded")]
    BracketOverflow { cap: f64 },

    #[error("no {k}-step method of order {p} satisfies the constraints")]
    InfeasibleOrder { k: usize, p: usize },

    #[error("simplex did not terminate after {0} pivots")]
    Cycling(usize),

    #[error("Newton iteration failed after {iterations} iterations (residual {residual:e})")]
    NewtonFailure {
        iterations: usize,
        residual: f64,
        history: Vec<f64>,
    },

    #[error("expected a history of {expected} steps, got {got}")]
    HistoryLength { expected: usize, got: usize },

    #[error("operator matrices are only available for linear schemes")]
    NonlinearScheme,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("unknown method `{0}`")]
    UnknownMethod(String),

    #[error("failed to parse {what}: {source}")]
    Parse {
        what: String,
        #[source]
        source: serde_json::Error,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
