use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("multiplicity undefined for zero")]
    MultiplicityOfZero,

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("invalid place: {0}")]
    InvalidPlace(String),

    #[error("not a triangle: the three points must be pairwise distinct")]
    NotATriangle,

    #[error("invalid ball: {0}")]
    InvalidBall(String),

    #[error("convergence not certified at this precision")]
    ConvergenceNotCertified,

    #[error("declared tail bound violated at index {index}: valuation {observed} < {declared}")]
    TailViolated {
        index: u64,
        observed: String,
        declared: i64,
    },

    #[error("p-adic contexts differ: {0} vs {1}")]
    ContextMismatch(u64, u64),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("weights must be nonzero (index {0})")]
    ZeroWeight(usize),

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("invalid spectral profile: {0}")]
    InvalidProfile(String),

    #[error("not a finite-rank diagonal profile")]
    NotFiniteRank,

    #[error("oracle limited to small truncations (t = {0}, limit {1})")]
    OracleTooLarge(usize, usize),

    #[error("rational-root search out of range: {0}")]
    RootSearchTooLarge(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
