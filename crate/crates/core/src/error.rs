use thiserror::Error;

use crate::ode::OdeError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero mode is not allowed in a zero-mean field")]
    ZeroMode,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("coefficient at mode {mode} is not divergence free (|k.v|/(|k||v|) = {residual:e})")]
    NotDivergenceFree { mode: String, residual: f64 },

    #[error("duplicate mode {0}")]
    DuplicateMode(String),

    #[error("empty mode set")]
    EmptyModeSet,

    #[error("mode {0} is not in the mode set")]
    UnknownMode(String),

    #[error("time {t} outside of [0, {horizon}]")]
    TimeOutOfRange { t: f64, horizon: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("integrator failure: {0}")]
    Integrator(#[from] OdeError),

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn at_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}
