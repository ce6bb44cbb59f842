use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
    #[error("horizon {horizon} exceeds lifetime {t_max} of a non-periodic graph")]
    HorizonExceeded { horizon: usize, t_max: usize },
    #[error("cycle detection stored more than {cap} states")]
    StateCapExceeded { cap: usize },
    #[error("{count} candidate schedules exceed the cap of {cap}")]
    CandidateCapExceeded { count: u128, cap: u128 },
    #[error("constraint unsatisfiable: {0}")]
    Unsatisfiable(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("size cap: {0}")]
    SizeCap(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}
