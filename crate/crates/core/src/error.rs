use thiserror::Error;

/// Errors raised by the library. Verdicts (pass/fail) are not errors; these
/// cover malformed input, violated preconditions and numerical breakdown.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("rank deficient: {0}")]
    RankDeficient(String),
    #[error("normalrank deficient: [P -Q] has normalrank {rank} < {n}")]
    NormalrankDeficient { rank: usize, n: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("zero polynomial has no roots")]
    ZeroPolynomial,
    #[error("singular Lyapunov operator")]
    SingularLyapunov,
    #[error("lossless certificate infeasible: {0}")]
    LosslessInfeasible(String),
    #[error("inconclusive split: {0}")]
    InconclusiveSplit(String),
    #[error("matrix is not Hermitian within tolerance")]
    NotHermitian,
    #[error("not a positive-real pair")]
    NotPositiveRealPair,
    #[error("no state-space realization (input-output form violated)")]
    NoRealization,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("not factorizable: {0}")]
    NotFactorizable(String),
    #[error("no L exists (certificate construction fails at stable stage): {0}")]
    NoL(String),
    #[error("condition 5 infeasible: {0}")]
    AreInfeasible(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}
