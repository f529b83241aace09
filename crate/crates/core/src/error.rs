use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("expected length {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("polynomial degree must be at least 1")]
    DegenerateDegree,

    #[error("polynomial is not monic")]
    NotMonic,

    #[error("index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("operation requires a symmetric mask")]
    NotSymmetric,

    #[error("operation requires an asymmetric mask")]
    NotAsymmetric,

    #[error("exhaustive subset search limited to n <= {max}, got n = {n}")]
    SearchTooLarge { n: usize, max: usize },

    #[error("{name} = {value} is outside [0, 1]")]
    ProbabilityRange { name: &'static str, value: f64 },

    #[error("need {needed} factorial moments, got {got}")]
    InsufficientMoments { needed: usize, got: usize },

    #[error("eigenvalue solver did not converge (n = {n}, seed = {seed:?}, trial = {trial:?})")]
    EigenNonConvergence {
        n: usize,
        seed: Option<u64>,
        trial: Option<u64>,
    },

    #[error(
        "graph verdict {graph} disagrees with spectrum verdict {spectrum} \
         (seed = {seed}, trial = {trial})"
    )]
    BridgeDisagreement {
        seed: u64,
        trial: u64,
        graph: bool,
        spectrum: bool,
    },

    #[error("oracle disagreement on mask:\n{mask}")]
    OracleDisagreement { mask: String },

    #[error("threshold counterexample ({which}) on mask:\n{mask}")]
    ThresholdViolation { which: &'static str, mask: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error: {0}")]
    Parse(String),
}
