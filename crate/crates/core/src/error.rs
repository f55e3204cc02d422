use thiserror::Error;

/// Errors raised by the library. Verification failures of a dissection are
/// normally reported through [`crate::dissection::VerificationReport`]; the
/// `VerificationFailure` variant is only used where a caller asked for a
/// dissection that must verify.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("source points are collinear")]
    CollinearSource,
    #[error("affine map is singular (det = {0:e})")]
    SingularMap(f64),
    #[error("degenerate quadrangle: {0}")]
    DegenerateQuadrangle(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("Newton refinement did not converge: {0}")]
    ConvergenceFailure(String),
    #[error("combinatorial type needs exactly three pieces, got {0}")]
    NotThreePieces(usize),
    #[error("quadrangles are not of the same affine type")]
    TypeMismatch,
    #[error("invalid cut weights: {0}")]
    InvalidWeights(String),
    #[error("type C self-affinities do not exist for parallelograms (z = {0})")]
    ParallelogramExcluded(f64),
    #[error("diagonal lines are parallel")]
    DegenerateDiagonals,
    #[error("dissection failed verification: {0}")]
    VerificationFailure(String),
    #[error("dissection is not verified")]
    UnverifiedDissection,
    #[error("no catalogue available: {0}")]
    MissingCatalogue(String),
    #[error("malformed input: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
