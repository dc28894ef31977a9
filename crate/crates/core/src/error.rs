use thiserror::Error;

/// Errors raised anywhere in the reduction pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("variable or literal {0} is not assigned")]
    UnassignedVariable(usize),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("instance has no predicates")]
    EmptyInstance,
    #[error("contradiction while tailoring predicate {id}: {message}")]
    Contradiction { id: usize, message: String },
    #[error("predicate {0} has no achievable acceptable total")]
    EmptyAcceptableSet(usize),
    #[error("{count} variables exceed the enumeration cap of {cap}")]
    TooLargeToEnumerate { count: usize, cap: usize },
    #[error("system is inconsistent: {0}")]
    InconsistentSystem(String),
    #[error("instance is not satisfiable")]
    NotSatisfiable,
    #[error("invalid modulus {0}: must be a prime greater than 27")]
    InvalidModulus(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// Tags an error with the pipeline stage it came from.
    pub fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// Strips any stage tags.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
