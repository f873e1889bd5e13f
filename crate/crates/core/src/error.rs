use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid packing: {0}")]
    InvalidPacking(String),

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(invalid(format!("probability {p} outside [0, 1]")))
    }
}

pub(crate) fn same_universe(n: usize, sets: &[&crate::graph::VertexSet]) -> Result<()> {
    match sets.iter().find(|s| s.universe() != n) {
        Some(s) => Err(invalid(format!("vertex set over {} vertices used with a graph on {n}", s.universe()))),
        None => Ok(()),
    }
}
