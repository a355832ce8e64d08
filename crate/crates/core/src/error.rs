use thiserror::Error;

/// Failures raised by the geometric stages of the solver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum IkError {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// A quantity that the preceding stages guarantee (a point on a sphere,
    /// a ratio within [-1, 1]) did not hold beyond rounding tolerance.
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    /// Shoulder, elbow and circle centre are collinear (straight or fully
    /// folded arm), so the hand plane is undefined and the wrist roll is free.
    #[error("hand plane is undefined: shoulder, elbow and circle centre are collinear")]
    DegenerateHandPlane,

    #[error("elbow policy violation: {0}")]
    PolicyViolation(String),
}

/// Errors produced while loading an arm configuration document.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("could not parse configuration: {0}")]
    Parse(String),

    #[error("missing key `{0}`")]
    Missing(String),

    #[error("{key}: {message}")]
    Invalid { key: String, message: String },
}

impl ConfigError {
    pub(crate) fn invalid(key: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError::Invalid {
            key: key.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = IkError> = std::result::Result<T, E>;
