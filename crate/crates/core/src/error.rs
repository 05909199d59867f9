use thiserror::Error;

/// Errors raised by the coverage library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoverageError {
    /// An input violates a documented invariant.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Zero-length link (ground distance 0 with equal antenna heights).
    #[error("degenerate link geometry: 3-D distance is zero")]
    DegenerateGeometry,

    /// A derivative order whose closed form overflows `f64`.
    #[error("derivative of order {order} is not representable (fading order {fading_order})")]
    DerivativeOrder { order: usize, fading_order: u32 },

    /// Adaptive quadrature ran out of its subdivision budget.
    #[error("quadrature did not converge on [{lo}, {hi}]: error {error:.3e} after {evaluations} evaluations")]
    Quadrature {
        lo: f64,
        hi: f64,
        error: f64,
        evaluations: usize,
    },

    /// A probability left `[-tol, 1 + tol]`, which means an integral is wrong.
    #[error("probability {value} outside [0, 1] beyond tolerance {tolerance:.1e} ({context})")]
    ProbabilityOutOfRange {
        value: f64,
        tolerance: f64,
        context: &'static str,
    },

    /// Bad sweep or configuration request.
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T, E = CoverageError> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> CoverageError {
    CoverageError::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
