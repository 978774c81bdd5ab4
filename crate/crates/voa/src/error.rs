use thiserror::Error;

use crate::exactalg::AlgError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error("theta maps M(1,lam) to M(1,-lam); use thetaTwist")]
    ThetaOnExp,
    #[error("state is not homogeneous: degrees {0:?}")]
    Inhomogeneous(Vec<String>),
    #[error("generator index out of range or repeated: {0}")]
    BadIndex(String),
    #[error("unknown generator '{0}'")]
    UnknownGenerator(String),
    #[error("mode index {0} has the wrong parity for this module")]
    ParityMismatch(String),
    #[error("use twistedNProduct for states of the twisted module")]
    TwistedInput,
    #[error("expected a state of the twisted module")]
    UntwistedInput,
    #[error("element must lie in the vacuum module")]
    NotVacuum,
    #[error("states live in different modules")]
    ModuleMismatch,
    #[error("weight {weight} exceeds the bound {bound}")]
    WeightBound { weight: i64, bound: i64 },
    #[error("span too large: about {0} generators (raise VOA_MAX_WEIGHT to allow)")]
    SpanTooLarge(usize),
    #[error("unsupported boundary shape: {0}")]
    BoundaryShape(String),
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
