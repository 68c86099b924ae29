use thiserror::Error;

/// Errors raised by the laboratory.
#[derive(Debug, Error)]
pub enum RitzError {
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("unsupported polynomial degree {0} (supported: 1, 2)")]
    UnsupportedDegree(usize),

    #[error("quadrature degree {requested} is below the required minimum {minimum}")]
    QuadratureDegree { requested: usize, minimum: usize },

    #[error("conjugate gradients did not converge after {iterations} iterations (relative residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("point ({0}, {1}) lies outside the domain")]
    PointOutside(f64, f64),

    #[error("point ({0}, {1}) lies on an element boundary")]
    PointOnElementBoundary(f64, f64),

    #[error("spaces are not nested: {0}")]
    NotNested(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("unknown corpus function `{name}` (valid: {valid})")]
    UnknownCorpus { name: String, valid: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = RitzError> = std::result::Result<T, E>;
