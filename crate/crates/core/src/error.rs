use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group spec: {0}")]
    InvalidSpec(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("budget exceeded while {what} (partial count {count})")]
    Budget { what: String, count: usize },
    #[error("invalid group table: {0}")]
    InvalidTable(String),
    #[error("cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn budget(what: impl Into<String>, count: usize) -> Self {
        Error::Budget { what: what.into(), count }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
