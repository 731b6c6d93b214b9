use thiserror::Error;

/// Errors produced by the localization pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// Input violates a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A point lies outside the virtual grid extent (beyond the clamping epsilon).
    #[error("point ({x}, {y}) is outside the grid extent")]
    OutOfBounds { x: f64, y: f64 },

    /// Kernel matrix factorization failed; carries condition diagnostics.
    #[error("GP factorization failed for tower {tower_id}: {detail}")]
    Factorization { tower_id: String, detail: String },

    /// Training diverged (non-finite loss).
    #[error("training aborted at epoch {epoch}: {detail}")]
    Diverged { epoch: usize, detail: String },

    /// Lookup for an unknown key (phone id, tower id, cell index).
    #[error("not found: {0}")]
    NotFound(String),

    /// Vector length disagreement between paired arguments.
    #[error("length mismatch: {context} ({left} vs {right})")]
    LengthMismatch {
        context: &'static str,
        left: usize,
        right: usize,
    },

    /// Dataset or model file could not be read or parsed.
    #[error("{path}: {detail}")]
    Format { path: String, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
