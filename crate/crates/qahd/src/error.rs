use thiserror::Error;

/// Unified error type for the whole crate.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum QahdError {
    /// A term violates a structural invariant, most commonly a power-log
    /// degree inside the pole window around a negative integer.
    #[error("invalid term: {0}")]
    InvalidTerm(String),

    /// Dilation scale must be strictly positive.
    #[error("dilation scale must be positive, got {0}")]
    NonPositiveScale(f64),

    /// The degree derivative only exists for the power-log families.
    #[error("d/dlambda is not defined for {0}")]
    NotDifferentiableInLambda(&'static str),

    /// Requested operation falls outside the representable basis.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// The boundary-value expansion at a negative integer degree with a
    /// nonzero log power has no residence in the basis.
    #[error("order-zero component: {0}")]
    OrderZero(String),

    /// Adaptive quadrature exhausted its panel budget above tolerance.
    #[error("quadrature failed: achieved error {achieved:e}, requested {requested:e}")]
    QuadratureFailure { achieved: f64, requested: f64 },

    /// Gamma-function machinery evaluated too close to a pole.
    #[error("gamma argument near pole: {re}+{im}i")]
    PoleArgument { re: f64, im: f64 },

    /// Frequency-coefficient system condition number exceeded the ceiling.
    #[error("coefficient system ill-conditioned: cond {cond:e} exceeds ceiling")]
    IllConditioned { cond: f64 },

    /// Lower-boundary frequency terms are only defined on the real axis.
    #[error("branch unsupported: {0}")]
    BranchUnsupported(String),

    /// Frequency expressions cannot be evaluated at the origin.
    #[error("frequency expression evaluated at zero")]
    ZeroFrequency,

    /// Text-grammar parse failure with byte position and expectation hint.
    #[error("parse error at byte {offset}: expected {expected}")]
    Parse { offset: usize, expected: String },

    /// An operation precondition was violated by the caller.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A test function cannot support the requested transformation.
    #[error("test function: {0}")]
    TestFunction(String),
}

pub type Result<T> = std::result::Result<T, QahdError>;
