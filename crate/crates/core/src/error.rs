use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u32),

    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(u32),

    #[error("structure of order {order} exceeds the configured budget of {limit} elements")]
    Budget { order: u128, limit: u64 },

    #[error("ring kind {actual} does not support {operation}")]
    WrongKind {
        operation: &'static str,
        actual: &'static str,
    },

    #[error("element {0} is not idempotent")]
    NotIdempotent(u32),

    #[error("element index {index} out of range for order {order}")]
    OutOfRange { index: u64, order: u32 },

    #[error("structure has no zero element")]
    MissingZero,

    #[error("structure has no additive table")]
    MissingAddition,

    #[error("structure has no identity element")]
    MissingIdentity,

    #[error("empty idempotent set")]
    NoIdempotents,

    #[error("basic product of idempotents {0} and {1} is not idempotent")]
    BasicProductNotIdempotent(u32, u32),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("sandwich intersection for ({e}, {f}) has {size} members, expected exactly one")]
    NonUniqueWitness { e: u32, f: u32, size: usize },

    #[error("sandwich routes disagree on ({e}, {f})")]
    RouteDisagreement { e: u32, f: u32 },

    #[error("table parse error: {0}")]
    Parse(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
