use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("empty generator list")]
    EmptyGenerators,
    #[error("zero vector given as a generator")]
    ZeroGenerator,
    #[error("cone is not pointed (contains a line)")]
    NotPointed,
    #[error("cone is not full-dimensional (spans {rank} of {dim} dimensions)")]
    NotFullDimensional { rank: usize, dim: usize },
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("unit is not an order unit of the cone")]
    UnitNotOrderUnit,
    #[error("effects belong to different algebras")]
    AlgebraMismatch,
    #[error("vector {0} is not an effect (not in [0, u])")]
    InvalidEffect(String),
    #[error("scalar {0} outside [0, 1]")]
    ScalarOutOfRange(String),
    #[error("vector of dimension {got} is not in the span of a {expected}-dimensional algebra")]
    SpanMismatch { expected: usize, got: usize },
    #[error("spin-factor vector part has irrational norm (squared norm {0})")]
    SymbolicNormRequired(String),
    #[error("decomposition does not recompose the effect")]
    DecompositionMismatch,
    #[error("effect {0} is not sharp")]
    NotSharp(String),
    #[error("operation not supported for algebra kind {0}")]
    UnsupportedKind(String),
    #[error("summand has no effect that is not a multiple of its unit")]
    NoSuitableElement,
    #[error("context matches neither summand family: {0}")]
    ClassificationFailure(String),
    #[error("proposition check failed: {0}")]
    PropositionFailure(String),
    #[error("size limit exceeded: {0}")]
    SizeLimitExceeded(String),
    #[error("unknown builtin algebra `{0}`")]
    UnknownName(String),
    #[error("state space is empty")]
    EmptyStateSpace,
    #[error("no spectral decomposition exists for {0}")]
    NotSpectral(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
