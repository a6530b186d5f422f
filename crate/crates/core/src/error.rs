use thiserror::Error;

/// Errors raised by the block-operator, solver and Dirac-Coulomb routines.
///
/// Numeric payloads are reported as `f64` regardless of the scalar type the
/// computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("block {block} is not symmetric")]
    NotSymmetric { block: &'static str },

    #[error("hypothesis S >= c1 I > 0 violated: lambda_min(S) = {lambda_min:e}")]
    NonPositiveS { lambda_min: f64 },

    #[error("asserted lower bound c1 = {asserted:e} is not certified (lambda_min(S) = {lambda_min:e})")]
    InvalidC1 { asserted: f64, lambda_min: f64 },

    #[error("alpha must be non-negative, got {0:e}")]
    NegativeAlpha(f64),

    #[error("hypothesis violated: {0}")]
    HypothesisFailed(String),

    #[error("dense path limited to dimension {cap}, operator has dimension {dim}")]
    TooLarge { dim: usize, cap: usize },

    #[error("delta = {delta:e} exceeds the admissible bound c1*alpha/(c1+alpha) = {bound:e}")]
    DeltaOutOfRange { delta: f64, bound: f64 },

    #[error("negative spectral shift {0:e} may violate S >= c1 I > 0 and is not supported")]
    NegativeShiftUnsupported(f64),

    #[error("eigensolver did not converge after {iterations} iterations (worst residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("only {found} admissible eigenpairs found, {requested} requested")]
    InsufficientEigenpairs { found: usize, requested: usize },

    #[error("invalid grid: {0}")]
    BadRange(String),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("invalid quantum numbers: {0}")]
    InvalidQuantumNumbers(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed operator text at line {line}: {message}")]
    Format { line: usize, message: String },
}

impl Error {
    /// True for errors that signal a violated structural or positivity hypothesis
    /// of the block operator rather than a usage or software failure.
    pub fn is_hypothesis_violation(&self) -> bool {
        matches!(
            self,
            Error::HypothesisFailed(_) | Error::NonPositiveS { .. } | Error::InvalidC1 { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
