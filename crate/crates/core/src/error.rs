use thiserror::Error;

#[derive(Debug, Error)]
pub enum WakiError {
    #[error("configuration error at {path}: {message}")]
    Config { path: String, message: String },
    #[error("invalid Lie algebra data: {0}")]
    InvalidAlgebra(String),
    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),
    #[error("grading element is not fixed by the automorphism: {0}")]
    Incompatible(String),
    #[error("invalid grading: {0}")]
    InvalidGrading(String),
    #[error("critical level: 2K + |psi|^2 h = 0")]
    CriticalLevel,
    #[error("linear algebra: {0}")]
    Singular(String),
    #[error("field expression: {0}")]
    Field(String),
    #[error("mode {mode} is not in the support {support}")]
    ModeSupport { mode: String, support: String },
    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, WakiError>;

impl WakiError {
    pub fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        WakiError::Config { path: path.into(), message: message.into() }
    }
}
