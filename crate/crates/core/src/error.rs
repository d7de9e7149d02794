use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what} needs {requested}, above the configured cap of {cap}")]
    CapExceeded { what: &'static str, requested: String, cap: String },
    #[error("{0} is not dyadic at the required precision")]
    NotDyadic(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
}

impl Error {
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
