use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("group order {order} exceeds the cap of {cap}")]
    OrderCap { order: usize, cap: usize },

    #[error("invalid generators: {0}")]
    InvalidGenerators(String),

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("invalid group spec '{spec}': {reason}")]
    Parse { spec: String, reason: String },

    #[error("group table failed validation: {0}")]
    InvalidTable(String),

    #[error("element set is not a single conjugacy class")]
    NotAConjugacyClass,

    #[error("could not separate the central spectrum after {attempts} attempts: {reason}")]
    DegenerateSpectrum { attempts: usize, reason: String },

    #[error("iteration did not converge after {iterations} iterations (residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("the block sampler needs an irreducible degree spectrum")]
    MissingSpectrum,

    #[error("dimension {dim} exceeds the cap of {cap} for {what}")]
    DimensionCap { what: &'static str, dim: usize, cap: usize },

    #[error("operation requires an abelian group, got {0}")]
    NotAbelian(String),

    #[error("identity check failed: {0}")]
    IdentityViolation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code used by the command-line front end: 3 for numerical
    /// failures, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonConvergence { .. } | Error::DegenerateSpectrum { .. } => 3,
            _ => 2,
        }
    }
}
