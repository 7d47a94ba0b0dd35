use thiserror::Error;

/// Errors raised by the numerical kernels, parsers and the harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid precision: {0} bits (minimum is 64)")]
    InvalidPrecision(u32),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{message} (line {line}, column {column})")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("Dirichlet-eigenvalue collision at degree k = {k}: |w(R)| = 2^{w_exp}, |w'(R)| = 2^{dw_exp}")]
    DirichletCollision { k: usize, w_exp: i64, dw_exp: i64 },

    #[error("vanishing denominator at degree k = {k} ({context})")]
    VanishingDenominator { k: usize, context: String },

    #[error("singular argument: {0}")]
    Singular(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("kind mismatch: expected {expected}, found {found}")]
    KindMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("cache i/o error at {path}: {source}")]
    Cache {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::DirichletCollision { .. }
            | Error::VanishingDenominator { .. }
            | Error::Singular(_)
            | Error::Degenerate(_) => 3,
            Error::Cache { .. } => 4,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
