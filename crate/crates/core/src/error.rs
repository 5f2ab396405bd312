use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid rectangle: {0}")]
    InvalidRect(String),
    #[error("invalid direction set: {0}")]
    InvalidDirections(String),
    #[error("invalid scale grid: {0}")]
    InvalidScales(String),
    #[error("filtered direction set is empty")]
    EmptyFamily,
    #[error("direction {0} not prepared in the rotated table bundle")]
    DirectionNotPrepared(f64),
    #[error("grid of side {n} exceeds the dense assembly cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("operator failed the self-adjointness precheck (relative gap {0:e})")]
    NotSelfAdjoint(f64),
    #[error("direction set has no anchors")]
    NoAnchors,
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
    #[error("infeasible configuration: {0}")]
    Infeasible(String),
    #[error("field format: {0}")]
    Format(String),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
