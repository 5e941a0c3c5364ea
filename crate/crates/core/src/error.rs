use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    CompositeP(u64),
    #[error("{p}^{n} exceeds the supported bound 2^{bound_log2}")]
    TooLarge { p: u64, n: u32, bound_log2: u32 },
    #[error("could not factor {0} within the iteration budget")]
    FactorizationFailure(u64),
    #[error("modulus polynomial is not primitive")]
    NotPrimitive,
    #[error("invalid field specification: {0}")]
    InvalidSpec(String),
    #[error("{m} does not divide the extension degree {n}")]
    NotASubfield { m: u32, n: u32 },
    #[error("extension degree {0} is odd")]
    OddDegree(u32),
    #[error("initial state is all zero")]
    ZeroState,
    #[error("gcd({d}, {modulus}) != 1")]
    NotCoprime { d: u64, modulus: u64 },
    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: u64, modulus: u64 },
    #[error("transform over {0} points exceeds the memory budget")]
    MemoryBudget(u64),
    #[error("brute-force enumeration of {0} tuples exceeds the budget")]
    Budget(u128),
    #[error("parameters out of domain: {0}")]
    OutOfDomain(String),
    #[error("coset method inapplicable: {0}")]
    MethodInapplicable(String),
    #[error("condition violated: {0}")]
    ConditionViolated(String),
    #[error("value is not a rational integer")]
    NotRational,
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by bad input rather than by the computation.
    pub fn is_usage(&self) -> bool {
        !matches!(self, Error::Io(_) | Error::Json(_) | Error::FactorizationFailure(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
