use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the domain of the operation (non-finite, out of
    /// range, at a boundary where the map diverges).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("capacity exceeded: {what} = {value} is above the cap of {cap}")]
    Capacity {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("root finding failed to converge: {0}")]
    NoConvergence(String),

    /// The design matrix does not have full column rank.
    #[error("singular design: column `{column}` is linearly dependent on earlier columns")]
    SingularDesign { column: String },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("schema error: column `{0}` not found")]
    MissingColumn(String),

    #[error("row {row}: cannot parse `{value}` in column `{column}` as a number")]
    Parse {
        row: usize,
        column: String,
        value: String,
    },

    #[error("row {row}: {message}")]
    RowDomain { row: usize, message: String },

    #[error("class {class}: {message}")]
    ClassDomain { class: String, message: String },

    #[error("fitted mean reached the boundary of (0,1) and step-halving could not recover")]
    BoundaryFit,

    #[error("empty input: {0}")]
    Empty(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub(crate) fn check_finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be finite, got {x}")))
    }
}
