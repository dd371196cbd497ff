use thiserror::Error;

/// Errors produced while building curves and maps or while evaluating the
/// numerical pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("at least {min} samples are required, got {got}")]
    TooFewSamples { min: usize, got: usize },

    #[error("node count must be a power of two >= 4, got {0}")]
    InvalidNodeCount(usize),

    #[error("polygonal proxy self-intersects between segments {first} and {second}")]
    SelfIntersecting { first: usize, second: usize },

    #[error("tangent degenerates: min |gamma'| = {min_speed:e}")]
    DegenerateTangent { min_speed: f64 },

    #[error("argument {value} outside the admissible range [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },

    #[error("map period shift {shift} does not match curve length {length}")]
    RangeMismatch { shift: f64, length: f64 },

    #[error("boundary map is not a weak homeomorphism: {0}")]
    NotWeakHomeomorphism(String),

    #[error("Poisson kernel radius must lie in [0, 1), got {0}")]
    RadiusOutOfRange(f64),

    #[error("point {re} + {im}i lies outside the open unit disk")]
    OutsideDisk { re: f64, im: f64 },

    #[error("kernel bound violated: |K| = {abs_k:e} > bound {bound:e}")]
    BoundViolated { abs_k: f64, bound: f64 },

    #[error("integral diverges numerically (non-Dini modulus): {0}")]
    NonDini(String),

    #[error("boundary gradient degenerates: l(F) = {0:e}")]
    DegenerateBoundary(f64),

    #[error("lower gradient bound l(F) must be positive, got {0:e}")]
    ZeroLowerBound(f64),

    #[error("S must be >= 1, got {0}")]
    SBelowOne(f64),

    #[error("w_z vanishes at {re} + {im}i")]
    VanishingDerivative { re: f64, im: f64 },

    #[error("numerical guard tripped: {0}")]
    NumericalGuard(String),
}

impl Error {
    /// Process exit code used by the command-line harness.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BoundViolated { .. }
            | Error::NonDini(_)
            | Error::VanishingDerivative { .. }
            | Error::NumericalGuard(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
