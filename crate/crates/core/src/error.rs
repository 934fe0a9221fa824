use thiserror::Error;

use crate::chart::Chart;

pub type Result<T> = std::result::Result<T, FinslerError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FinslerError {
    #[error("jet depth {requested} is not supported (maximum {max})")]
    UnsupportedOrder { requested: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point {point:?} lies outside the domain of the metric")]
    OutsideDomain { point: [f64; 2] },

    #[error("polar radius {r} is below the coordinate guard {r_min}")]
    PolarGuard { r: f64, r_min: f64 },

    #[error("zero tangent vector")]
    ZeroVector,

    #[error("chart mismatch: metric lives in {expected:?}, input given in {found:?}")]
    ChartMismatch { expected: Chart, found: Chart },

    #[error("metric is not positive at {point:?} in direction {direction:?} (F = {value})")]
    NonPositiveMetric {
        point: [f64; 2],
        direction: [f64; 2],
        value: f64,
    },

    #[error("fundamental tensor is not positive definite at {point:?}, direction {direction:?} (det = {det})")]
    NonConvex {
        point: [f64; 2],
        direction: [f64; 2],
        det: f64,
    },

    #[error("singular {what} matrix (det = {det})")]
    Singular { what: &'static str, det: f64 },

    #[error("navigation problem unsolvable at {point:?}: Φ(-εv) = {wind_norm} >= 1 (admissible |ε| < {max_epsilon})")]
    Unsolvable {
        point: [f64; 2],
        wind_norm: f64,
        max_epsilon: f64,
    },

    #[error("requested radius {requested} exceeds the admissible navigation radius {max_radius}")]
    DomainTooLarge { requested: f64, max_radius: f64 },

    #[error("background metric is not Riemannian")]
    NotRiemannian,

    #[error("root function changes sign more than once on the bracket [{lo}, {hi}]")]
    NonMonotone { lo: f64, hi: f64 },

    #[error("root finder did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("constant-S formulas require e_ij = 2c(a_ij - b_i b_j); residual {residual:e} at c = {c}")]
    NotIsotropic { c: f64, residual: f64 },

    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("epsilon {epsilon} is not admissible for {id}")]
    EpsilonOutOfRange { id: String, epsilon: f64 },

    #[error("closed form and navigation construction disagree for {what} (relative error {rel:e})")]
    TranscriptionMismatch { what: String, rel: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown identifier {0:?}")]
    UnknownId(String),
}
