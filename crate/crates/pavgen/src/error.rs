use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("cannot parse permutation from {0:?}: {1}")]
    PermutationParse(String, String),

    #[error("invalid pattern set: {0}")]
    InvalidPatternSet(String),

    #[error("parameter out of range for family {family}: {detail}")]
    ParamOutOfRange { family: String, detail: String },

    #[error("site {site} out of range for a length-{len} permutation (valid: 1..={max})")]
    SiteOutOfRange { site: usize, len: usize, max: usize },

    #[error("precondition violated: {0} does not avoid the pattern set")]
    NotAvoiding(String),

    #[error("succession rule domain violation: {0}")]
    RuleDomain(String),

    #[error("succession rule is invalid on its reachable labels: {0}")]
    InvalidLabelGraph(String),

    #[error("unknown catalog entry {0:?}")]
    UnknownEntry(String),

    #[error("entry {id} requires parameter {param}")]
    MissingParam { id: String, param: &'static str },

    #[error("entry {id} takes no parameter {param}")]
    UnexpectedParam { id: String, param: &'static str },

    #[error("tree depth {requested} exceeds the cap of {cap}")]
    DepthCapExceeded { requested: usize, cap: usize },

    #[error("max-n {requested} exceeds the hard cap of {cap} (oracle cost is exponential)")]
    OracleDepthExceeded { requested: usize, cap: usize },

    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
