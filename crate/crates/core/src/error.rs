use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("config error at line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("invalid trajectory: {0}")]
    InvalidTrajectory(String),

    #[error("oracle capacity exceeded: n = {n} satellites (maximum {max})")]
    Capacity { n: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("integration failed at t = {t}: {msg}")]
    Integration { t: f64, msg: String },

    #[error("measure error: {0}")]
    Measure(String),

    #[error("malformed CSV at line {line}: {msg}")]
    Csv { line: u64, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
