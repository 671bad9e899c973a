use std::path::PathBuf;

/// Errors produced by the solver and the scenario runner.
///
/// Numerical aborts carry enough context (node, time, iteration) to locate
/// the failure; configuration errors carry the JSON path of the offending
/// field.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Fractional order outside the supported range.
    #[error("alpha must lie in {expected}, got {value}")]
    InvalidAlpha {
        /// Accepted interval, e.g. `(0, 1]`.
        expected: &'static str,
        /// Offending value.
        value: f64,
    },

    /// Malformed time grid (non-positive horizon, too few steps, ...).
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// A field was evaluated with a vector of the wrong length, or produced one.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch {
        /// Declared dimension.
        expected: usize,
        /// Actual length.
        got: usize,
    },

    /// The vector field returned NaN or infinity during integration.
    #[error("non-finite field output at node {node} (t = {time}), component {component}")]
    NonFiniteField {
        /// Grid node at which the evaluation failed.
        node: usize,
        /// Time of that node.
        time: f64,
        /// Index of the non-finite component.
        component: usize,
    },

    /// A forward or backward pass of the sweep blew up.
    #[error("integration failed in sweep iteration {iteration}")]
    SweepAborted {
        /// Sweep iteration (1-based) in which integration failed.
        iteration: usize,
        /// Underlying integrator error.
        #[source]
        source: Box<Error>,
    },

    /// A scenario item failed; identifies which variant and order.
    #[error("{variant} run at alpha = {alpha} failed")]
    CaseFailed {
        /// Scenario variant name (`uncontrolled` or `controlled`).
        variant: &'static str,
        /// Fractional order of the failing item.
        alpha: f64,
        /// Underlying solver or I/O error.
        #[source]
        source: Box<Error>,
    },

    /// A series oracle (Mittag-Leffler) failed to converge or lost precision.
    #[error("series evaluation failed: {0}")]
    SeriesFailure(String),

    /// Invalid argument passed directly to a library operation.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Configuration parse or validation error; the message names the field.
    #[error("config: {0}")]
    Config(String),

    /// Filesystem failure while writing scenario outputs.
    #[error("i/o failure on {path}")]
    Io {
        /// File or directory involved.
        path: PathBuf,
        /// Underlying error.
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(path: &str, message: impl std::fmt::Display) -> Self {
        Error::Config(format!("{path}: {message}"))
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
