use alloc::string::String;

/// Failures reported by the engine. Every variant carries enough context
/// to be shown to a user without further lookups.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("weight {0} is smaller than 2")]
    WeightTooSmall(i64),
    #[error("expected {expected} parameters, got {got}")]
    LambdaCount { expected: usize, got: usize },
    #[error("parameter {0} is zero")]
    LambdaZero(String),
    #[error("parameter {0} occurs twice")]
    LambdaDuplicate(String),
    #[error("first parameter must be 1, got {0}")]
    LambdaNotNormalized(String),
    #[error("vector length {got} does not match expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("lattice elements belong to different weight types")]
    DescriptorMismatch,
    #[error("slope of the zero class is undefined")]
    ZeroClass,
    #[error("class is not the class of a line bundle: {0}")]
    NotLineBundle(String),
    #[error("classes do not form a unimodular basis (determinant {0})")]
    NotUnimodular(String),
    #[error("tilting datum is not tilting-consistent: {0}")]
    NotTilting(String),
    #[error("{0} is unavailable for this weight type")]
    Unavailable(String),
    #[error("weight type is not tubular")]
    NotTubular,
    #[error("unknown vertex label {0}")]
    UnknownLabel(i64),
    #[error("line bundle module outside the window: failing vertex {vertex}")]
    OutsideWindow { vertex: usize },
    #[error("dual class of vertex {0} is neither a sheaf nor a shifted sheaf")]
    NoPolarity(i64),
    #[error("approximation map is not {0}")]
    Approximation(String),
    #[error("reflection validation failed: {0}")]
    Validation(String),
    #[error("no reference in the pool represents the trajectory: {0}")]
    WindowExhausted(String),
    #[error("step {step}: {source}")]
    Step {
        step: usize,
        #[source]
        source: alloc::boxed::Box<Error>,
    },
    #[error("quiver data missing")]
    MissingQuiver,
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = core::result::Result<T, Error>;
