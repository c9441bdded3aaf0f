use thiserror::Error;

use crate::hypothesis::HypothesisReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("non-finite value in {context}")]
    NonFinite { context: &'static str },

    #[error("vectors must have positive dimension")]
    ZeroDimension,

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("imaginary part {im} rejected in real-space mode ({context})")]
    ImaginaryInRealMode { context: &'static str, im: f64 },

    #[error("invalid quadrature grid: {0}")]
    InvalidGrid(String),

    #[error("tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),

    #[error("orthonormal family must be nonempty")]
    EmptyFamily,

    #[error("Gram residual {residual:e} at pair ({i}, {j}) exceeds tolerance {tolerance:e}")]
    GramResidualExceeded {
        i: usize,
        j: usize,
        residual: f64,
        tolerance: f64,
    },

    #[error("vector {index} is linearly dependent on its predecessors (residual ratio {ratio:e})")]
    RankDeficient { index: usize, ratio: f64 },

    #[error("{kind} family needs a quadrature grid")]
    GridRequired { kind: &'static str },

    #[error("corridor must be nonempty")]
    EmptyCorridor,

    #[error("sum of Re(upper * conj(lower)) is {re_sum:e}; it must be strictly positive")]
    NonpositiveReSum { re_sum: f64 },

    #[error("corridor must be real with nonnegative bounds for this inequality")]
    NotRealNonnegative,

    #[error("real-space mode required: {0}")]
    NotRealMode(&'static str),

    #[error(
        "hypothesis identity violated: inner-product form {cond_i:e} vs ball form {ball_form:e} \
         (gap {gap:e}, tolerance {tolerance:e}); the family is not orthonormal enough"
    )]
    IdentityViolation {
        cond_i: f64,
        ball_form: f64,
        gap: f64,
        tolerance: f64,
    },

    #[error("hypothesis fails for {which}: residual {} exceeds radius {}", .report.cond_ii_residual, .report.radius)]
    HypothesisFailed {
        which: &'static str,
        report: Box<HypothesisReport>,
    },

    #[error("Hölder exponent must satisfy p > 1, got {0}")]
    BadExponent(f64),

    #[error("lambda must lie strictly inside (0, 1), got {0}")]
    BadLambda(f64),

    #[error("{0} must be a nonzero vector")]
    ZeroVector(&'static str),

    #[error("the selected bound needs a single-vector family, got {0} members")]
    NotSingleVector(usize),

    #[error("sandwich condition violated at node {node} ({side} side, margin {margin:e})")]
    SandwichViolated {
        node: usize,
        side: &'static str,
        margin: f64,
    },

    #[error("epsilon must lie strictly inside (0, 1), got {0}")]
    BadEpsilon(f64),

    #[error("sweep needs at least one epsilon")]
    EmptySweep,

    #[error("no witness found where the {0} refinement is strictly tighter")]
    WitnessNotFound(&'static str),

    #[error("invalid fuzz configuration: {0}")]
    BadConfig(String),

    #[error("{path}: {message}")]
    Instance { path: String, message: String },
}
