use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("recursion depth {depth} overflows the node counter")]
    DepthOutOfRange { depth: u32 },

    #[error("generator `{generator}` did not produce a connected graph after {attempts} attempts")]
    NotConnected { generator: String, attempts: u32 },

    #[error("unknown topology generator `{0}`")]
    UnknownGenerator(String),

    #[error("{0}")]
    Undefined(&'static str),

    #[error("conductance oracle refused a graph with {n} nodes (limit {limit})")]
    OracleTooLarge { n: usize, limit: usize },

    #[error("box-counting fit needs at least {needed} usable scales, found {found}")]
    EstimationFailed {
        needed: usize,
        found: usize,
        samples: Vec<(f64, usize)>,
    },

    #[error("node {node} referenced by flow {flow} does not exist")]
    MissingNode { flow: usize, node: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
