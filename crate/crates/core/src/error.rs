use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("capacity exceeded: N = {n} is above the dense limit of {limit} qubits")]
    Capacity { n: usize, limit: usize },

    #[error("critical point undefined: {0}")]
    UndefinedCriticalPoint(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("structural check failed: {0}")]
    Structural(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        domain(format!("probability p = {p} is outside [0, 1]"))
    }
}
