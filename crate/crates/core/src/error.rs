use thiserror::Error;

/// Errors surfaced by the simulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("team data: {0}")]
    TeamData(String),
    #[error("unknown confederation `{0}`")]
    UnknownConfederation(String),
    #[error("draw rejection sampler exceeded {attempts} attempts; constraints likely infeasible")]
    DrawCapExceeded { attempts: u64 },
    #[error("instance too large: {0}")]
    InstanceTooLarge(String),
    #[error("invalid tanking experiment: {0}")]
    InvalidTanking(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
