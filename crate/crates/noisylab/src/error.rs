use thiserror::Error;

/// Error taxonomy shared by all modules.
///
/// The CLI maps these onto exit codes: violations detected while *verifying*
/// something (an inconsistent sandwich, an inadmissible session, a failed
/// certificate) exit with 2, plain bad input exits with 1.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed arguments: empty vectors, non-finite entries, p < 1, ...
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Parameters outside a documented precondition (delta >= 1, eta <= 0, ...).
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    /// A point fed to an operator or session lies outside the domain ball.
    #[error("domain violation: {0}")]
    DomainViolation(String),

    /// The problem instance is not supported by this operation.
    #[error("unsupported instance: {0}")]
    UnsupportedInstance(String),

    /// Declared functional class does not match the descriptor's analysis.
    #[error("class mismatch: {0}")]
    ClassMismatch(String),

    /// A functional can leave [-1, 1] on the domain (or clamping was required
    /// where it is forbidden).
    #[error("range violation: {0}")]
    RangeViolation(String),

    /// A session was aborted because a policy proposed an inadmissible
    /// functional.
    #[error("admissibility violation: {0}")]
    AdmissibilityViolation(String),

    /// A cover or plan has the wrong cardinality/shape for the construction.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// The requested accuracy cannot be certified from the stored truncation.
    #[error("infeasible truncation: {0}")]
    InfeasibleTruncation(String),

    /// A combinatorial budget (cover size, sample count) exceeds the cap.
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    /// Cross-checked quantities disagree (lower bound above an upper bound,
    /// formula band disjoint from the estimated bracket, ...).
    #[error("inconsistency: {0}")]
    Inconsistency(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors that represent a *failed verification* rather than bad
    /// usage; the CLI exits with 2 for these and 1 otherwise.
    pub fn is_verification_failure(&self) -> bool {
        matches!(
            self,
            Error::Inconsistency(_)
                | Error::AdmissibilityViolation(_)
                | Error::RangeViolation(_)
                | Error::ClassMismatch(_)
        )
    }
}
