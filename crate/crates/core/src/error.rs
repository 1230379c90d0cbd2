use thiserror::Error;

use crate::quadrature::QuadResult;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("variable `{0}` is not allowed here")]
    UnexpectedVariable(String),

    #[error("variable `{0}` is unbound")]
    UnboundVariable(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("adaptive quadrature hit the depth cap: estimate {:.3e} > tolerance {tol:.3e}", .result.error_estimate)]
    DepthExceeded { result: QuadResult, tol: f64 },

    #[error("degenerate tangent at t = {t}: x' + y' = {sum:e}")]
    DegenerateTangent { t: f64, sum: f64 },

    #[error("{what} is not isotropic: max residual {residual:.3e}")]
    NotIsotropic { what: &'static str, residual: f64 },

    #[error("near-singular denominator (P+R)(x'+y') = {value:e} at t = {t}")]
    NearSingularDenominator { t: f64, value: f64 },

    #[error("case formula {case} = {case_value} disagrees with direct quadrature {direct_value} (|delta| {delta:e} > {allowed:e})")]
    CrossCheckFailure {
        case: &'static str,
        case_value: f64,
        direct_value: f64,
        delta: f64,
        allowed: f64,
    },

    #[error("plane case mismatch: operation needs {expected}, context is {actual}")]
    CaseMismatch {
        expected: &'static str,
        actual: &'static str,
    },

    #[error("angle {phi} is outside {domain}")]
    OutOfRange { phi: f64, domain: &'static str },

    #[error("invalid input: {0}")]
    Invalid(String),
}
