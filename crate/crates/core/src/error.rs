use alloc::string::String;

/// Errors raised by ensemble construction and the numerical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("ensemble has no states")]
    Empty,

    #[error("state {index} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },

    #[error("state {index} is not normalized (norm {norm})")]
    NotNormalized { index: usize, norm: f64 },

    #[error("{count} probabilities for {states} states")]
    ProbabilityCount { count: usize, states: usize },

    #[error("probability {index} is not strictly positive (got {value})")]
    NonPositiveProbability { index: usize, value: f64 },

    #[error("probabilities sum to {0}, expected 1")]
    ProbabilitySum(f64),

    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("matrix is not Hermitian (deviation {0})")]
    NotHermitian(f64),

    #[error("diagonal entry {index} is {value}, expected 1")]
    NotUnitDiagonal { index: usize, value: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {0})")]
    NotPsd(f64),

    #[error("spectrum value {0} outside the admissible range")]
    InvalidSpectrumValue(f64),

    #[error("not a valid spectrum: {0}")]
    NotAValidSpectrum(String),

    #[error("symmetric polynomial list must start with s_0 = 1 (got {0})")]
    BadLeadingCoefficient(f64),

    #[error("index {index} out of range {lo}..={hi}")]
    IndexOutOfRange { index: usize, lo: usize, hi: usize },

    #[error("invalid subset: {0}")]
    InvalidSubset(String),

    #[error("determinant has imaginary part {0}")]
    ComplexDeterminant(f64),

    #[error("volume invariants incomplete: missing subset {0:?}")]
    IncompleteInvariants(alloc::vec::Vec<usize>),

    #[error("coincident nodes {0} and {1}")]
    CoincidentNodes(f64, f64),

    #[error("derivative of order {order} unavailable at {x}")]
    DerivativeUnavailable { order: usize, x: f64 },

    #[error("zero eigenvalue where a logarithm is required")]
    ZeroEigenvalue,

    #[error("k = {k} is smaller than n = {n}")]
    KBelowN { k: usize, n: usize },

    #[error("parameter point is not realizable (min eigenvalue {0})")]
    Unrealizable(f64),

    #[error("evaluation point violated: {0}")]
    WrongEvaluationPoint(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = core::result::Result<T, Error>;
