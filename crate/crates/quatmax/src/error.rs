use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Evaluation was requested at a point of a field's declared singular locus.
    #[error("evaluation at singular point [{}, {}, {}]", .point[0], .point[1], .point[2])]
    SingularPoint { point: [f64; 3] },

    /// An operation needed a derivative oracle the field does not carry.
    #[error("field does not provide a {oracle} oracle")]
    MissingOracle { oracle: &'static str },

    /// A documented precondition was violated by the caller.
    #[error("contract violation: {0}")]
    Contract(String),

    /// Bad run configuration (grid, profile string, sample set, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// A square-root branch could not be continued over the sample set.
    #[error("branch cut crossing near [{}, {}, {}]: {detail}", .point[0], .point[1], .point[2])]
    BranchCut { point: [f64; 3], detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
