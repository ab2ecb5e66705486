use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-range input (bad ids, bad parameters, bad files).
    #[error("input error: {0}")]
    Input(String),

    /// The operation is mathematically undefined for the given arguments.
    #[error("domain error: {0}")]
    Domain(String),

    /// The exact oracle would have to enumerate more subsets than allowed.
    #[error("budget exceeded: C({n},{k}) = {subsets} subsets exceeds budget {budget}")]
    Budget {
        n: usize,
        k: usize,
        subsets: u128,
        budget: u128,
    },

    /// Instance too large to construct.
    #[error("refused: {0}")]
    TooLarge(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
