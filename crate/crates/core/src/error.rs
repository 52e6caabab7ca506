use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u32),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("{what} needs {size} items, above the cap of {cap}")]
    CapExceeded { what: &'static str, size: u128, cap: u128 },

    #[error("invalid S-weight: {0}")]
    InvalidWeight(String),

    #[error("invalid delta cube: {0}")]
    InvalidCube(String),

    #[error("weight is not determined by supports; a cube needs q = 2 or a support-determined weight")]
    NotSupportDetermined,

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("condition does not respect support: {0}")]
    ConditionNotSupportRespecting(String),

    #[error("precondition unmet: {0}")]
    Precondition(String),

    #[error("poset is not hierarchical")]
    NotHierarchical,

    #[error("{0} is not an automorphism of the structure")]
    NotAutomorphism(String),

    #[error("internal check failed: {0}")]
    Internal(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
