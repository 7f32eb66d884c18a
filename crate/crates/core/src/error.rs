use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate deformation parameter: {0}")]
    DegenerateParameter(String),
    #[error("invalid root-of-unity order r = {0} (need r >= 2)")]
    InvalidOrder(i64),
    #[error("degenerate root of unity r = {r}: nilpotency order k = {k} leaves a trivial k-fermion sector")]
    Degenerate { r: u32, k: u32 },
    #[error("mode dimension {0} too small (need at least 2)")]
    DimensionTooSmall(usize),
    #[error("k-fermion order {requested} does not match the root of unity (k = {actual})")]
    OrderMismatch { requested: usize, actual: usize },
    #[error("operator is not diagonal")]
    NotDiagonal,
    #[error("mode species mismatch: {0}")]
    SpeciesMismatch(String),
    #[error("mode index {index} out of range for a space with {len} modes")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("operators act on different spaces")]
    SpaceMismatch,
    #[error("operator has no definite Z2 grading")]
    UndefinedGrading,
    #[error("invalid rank parameter n = {0} (need n >= 2)")]
    InvalidRank(usize),
    #[error("unknown relation suite `{0}`")]
    UnknownSuite(String),
    #[error("extrapolation diverged: successive extrapolants differ by {spread:.3e}")]
    ExtrapolationDiverged { spread: f64 },
    #[error("number-operator spectrum is not integral (max deviation {deviation:.3e})")]
    NonIntegerSpectrum { deviation: f64 },
    #[error("truncation {dim} is not a multiple of k = {k} with at least two blocks")]
    TruncationNotMultiple { dim: usize, k: usize },
    #[error("syntax error at {line}:{column}: expected {expected}")]
    Syntax {
        line: usize,
        column: usize,
        expected: String,
    },
    #[error("unknown function `{name}` at {line}:{column}")]
    UnknownFunction {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("interior margin {margin} leaves no room in a mode of dimension {dim}")]
    MarginTooLarge { margin: usize, dim: usize },
    #[error("symbol `{0}` is not bound")]
    UnboundSymbol(String),
    #[error("graded bracket needs a definite grading for `{0}`")]
    GradingMissing(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
