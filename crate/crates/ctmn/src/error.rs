use thiserror::Error;

/// Errors produced by topology construction, state enumeration and the
/// numerical routines.
#[derive(Error, Debug)]
pub enum Error {
    #[error("duplicate node id `{0}`")]
    DuplicateId(String),
    #[error("unknown node id `{0}`")]
    UnknownId(String),
    #[error("node `{0}` conflicts with itself")]
    SelfConflict(String),
    #[error("node `{id}`: {what} must be positive (got {value})")]
    NonPositiveParameter {
        id: String,
        what: &'static str,
        value: f64,
    },
    #[error("node `{0}` is missing a position or carrier-sense range")]
    MissingGeometry(String),
    #[error("node `{0}` has an empty channel set")]
    EmptyChannelSet(String),
    #[error("node `{0}`: channel set must be contiguous with a power-of-two size")]
    InvalidChannelSet(String),
    #[error("network has {0} nodes, maximum supported is {max}", max = crate::MAX_NODES)]
    TooManyNodes(usize),
    #[error("state explosion: more than {cap} feasible states")]
    StateExplosion { cap: usize },
    #[error("state {0:#x} is not a feasible state of this network")]
    UnknownState(u32),
    #[error("parameter range unsupported: normalization constant overflows")]
    ParameterRange,
    #[error("balance solve requires at most {cap} states, state space has {n}")]
    OracleCapExceeded { n: usize, cap: usize },
    #[error("numerical failure in balance solve: {0}")]
    NumericalFailure(String),
    #[error("invalid simulation config: {0}")]
    InvalidSimConfig(String),
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("invalid override: {0}")]
    InvalidOverride(String),
    #[error("invalid sweep grid: {0}")]
    InvalidGrid(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
