use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("operator is not Hermitian (deviation {0:.3e})")]
    NonHermitian(f64),
    #[error("spectra have different totals ({0} vs {1})")]
    MismatchedTrace(f64, f64),
    #[error("operator is not positive definite")]
    NotPositiveDefinite,
    #[error("seed parameters are not generic: {0}")]
    DegenerateSeed(String),
    #[error("local operator for party {0} is singular")]
    SingularLocal(usize),
    #[error("expected {expected} parties, got {got}")]
    PartyCount { expected: usize, got: usize },
    #[error("state vector is invalid: {0}")]
    InvalidState(String),
    #[error("state is not in the maximally entangled set")]
    NotInMes,
    #[error("target is already in the maximally entangled set")]
    TargetInMes,
    #[error("input has the wrong shape: {0}")]
    WrongShape(String),
    #[error("operator violates the trace constraints (tr(A^†A X) = {tr_x:.3e}, tr(A^†A) = {tr:.6})")]
    BadConstraint { tr_x: f64, tr: f64 },
    #[error("invalid probability vector: {0}")]
    BadProbabilities(String),
    #[error("symmetry group contains a non-unitary element ({0})")]
    NonUnitaryGroup(String),
    #[error("POVM is incomplete (residual {0:.3e})")]
    IncompletePovm(f64),
    #[error("correction for outcome {outcome} on party {party} is not unitary")]
    NonUnitaryCorrection { outcome: usize, party: usize },
    #[error("no family representative matched the state")]
    NoFamilyMatch,
    #[error("bad sampler specification: {0}")]
    BadSpec(String),
    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
